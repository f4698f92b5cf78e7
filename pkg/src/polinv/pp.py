"""Primitive positive formulas: parsing, evaluation, definability.

Grammar (whitespace-insensitive between tokens):

    formula := "def" NAME "(" varlist ")" ":=" body
    body    := "true" | [ "exists" varlist "." ] atom { "&" atom }
    atom    := NAME "(" varlist ")" | VAR "=" VAR
    varlist := VAR { "," VAR }
    NAME, VAR := [A-Za-z_][A-Za-z0-9_]*

"def", "exists" and "true" are reserved words.  A body of "true" is the
empty conjunction, so the formula defines the full relation on its free
variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence, Union

from .core import Domain, Operation, Relation
from .errors import ParseError
from .galois import RelationSet, pol
from .limits import DEFAULT_LIMITS, Limits

_KEYWORDS = frozenset({"def", "exists", "true"})


@dataclass(frozen=True)
class RelationAtom:
    relation: str
    variables: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("relation atom needs at least one variable")

    def to_text(self) -> str:
        return f"{self.relation}({', '.join(self.variables)})"


@dataclass(frozen=True)
class EqualityAtom:
    left: str
    right: str

    def to_text(self) -> str:
        return f"{self.left} = {self.right}"


Atom = Union[RelationAtom, EqualityAtom]


def _atom_variables(atom: Atom) -> tuple[str, ...]:
    if isinstance(atom, RelationAtom):
        return atom.variables
    return (atom.left, atom.right)


@dataclass(frozen=True)
class PPFormula:
    """A named pp formula: free variables, existential variables, atoms."""

    name: str
    free_vars: tuple[str, ...]
    exist_vars: tuple[str, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "free_vars", tuple(self.free_vars))
        object.__setattr__(self, "exist_vars", tuple(self.exist_vars))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.free_vars:
            raise ValueError("a formula needs at least one free variable")
        declared: set[str] = set()
        for v in self.free_vars + self.exist_vars:
            if v in declared:
                raise ValueError(f"duplicate variable declaration: {v}")
            declared.add(v)
        for atom in self.atoms:
            for v in _atom_variables(atom):
                if v not in declared:
                    raise ValueError(f"undeclared variable: {v}")

    @property
    def arity(self) -> int:
        return len(self.free_vars)

    def to_text(self) -> str:
        """Canonical one-line form; parsing it back reproduces the formula.

        The one degenerate case, existential variables with no atoms, has
        no grammar spelling and canonicalizes to the equivalent "true".
        """
        head = f"def {self.name}({', '.join(self.free_vars)}) := "
        if not self.atoms:
            return head + "true"
        body = ""
        if self.exist_vars:
            body += f"exists {', '.join(self.exist_vars)} . "
        body += " & ".join(a.to_text() for a in self.atoms)
        return head + body


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|:=|[(),.&=]")
_SKIP_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        ws = _SKIP_RE.match(text, pos)
        if ws:
            chunk = ws.group()
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = ws.start() + chunk.rfind("\n") + 1
            pos = ws.end()
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line=line, column=pos - line_start + 1
            )
        tokens.append(_Token(m.group(), line, pos - line_start + 1))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token]) -> None:
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token | None:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def next(self, expected: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self._tokens[-1] if self._tokens else None
            raise ParseError(
                f"unexpected end of input" + (f", expected {expected!r}" if expected else ""),
                line=last.line if last else 1,
                column=last.column + len(last.text) if last else 1,
            )
        if expected is not None and tok.text != expected:
            raise ParseError(
                f"expected {expected!r}, found {tok.text!r}", line=tok.line, column=tok.column
            )
        self._pos += 1
        return tok


def _expect_name(stream: _TokenStream, what: str) -> _Token:
    tok = stream.next(None)
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok.text):
        raise ParseError(f"expected {what}, found {tok.text!r}", line=tok.line, column=tok.column)
    if tok.text in _KEYWORDS:
        raise ParseError(
            f"reserved word {tok.text!r} cannot be used as {what}", line=tok.line, column=tok.column
        )
    return tok


def _parse_varlist(stream: _TokenStream) -> list[_Token]:
    out = [_expect_name(stream, "a variable")]
    while stream.peek() is not None and stream.peek().text == ",":
        stream.next(",")
        out.append(_expect_name(stream, "a variable"))
    return out


def _parse_formula(stream: _TokenStream) -> PPFormula:
    stream.next("def")
    name = _expect_name(stream, "a formula name")
    stream.next("(")
    free = _parse_varlist(stream)
    stream.next(")")
    stream.next(":=")

    declared: dict[str, _Token] = {}
    for tok in free:
        if tok.text in declared:
            raise ParseError(
                f"duplicate variable declaration: {tok.text}", line=tok.line, column=tok.column
            )
        declared[tok.text] = tok

    nxt = stream.peek()
    if nxt is not None and nxt.text == "true":
        stream.next("true")
        return PPFormula(name.text, tuple(t.text for t in free), (), ())

    exist: list[_Token] = []
    if nxt is not None and nxt.text == "exists":
        stream.next("exists")
        exist = _parse_varlist(stream)
        stream.next(".")
        for tok in exist:
            if tok.text in declared:
                raise ParseError(
                    f"duplicate variable declaration: {tok.text}", line=tok.line, column=tok.column
                )
            declared[tok.text] = tok

    atoms: list[Atom] = []
    while True:
        head = _expect_name(stream, "a relation name or variable")
        nxt = stream.peek()
        if nxt is not None and nxt.text == "(":
            stream.next("(")
            args = _parse_varlist(stream)
            stream.next(")")
            for tok in args:
                if tok.text not in declared:
                    raise ParseError(
                        f"undeclared variable: {tok.text}", line=tok.line, column=tok.column
                    )
            atoms.append(RelationAtom(head.text, tuple(t.text for t in args)))
        elif nxt is not None and nxt.text == "=":
            stream.next("=")
            rhs = _expect_name(stream, "a variable")
            for tok in (head, rhs):
                if tok.text not in declared:
                    raise ParseError(
                        f"undeclared variable: {tok.text}", line=tok.line, column=tok.column
                    )
            atoms.append(EqualityAtom(head.text, rhs.text))
        else:
            where = nxt if nxt is not None else head
            raise ParseError(
                "expected '(' or '=' after name in atom", line=where.line, column=where.column
            )
        nxt = stream.peek()
        if nxt is not None and nxt.text == "&":
            stream.next("&")
            continue
        break
    return PPFormula(
        name.text, tuple(t.text for t in free), tuple(t.text for t in exist), tuple(atoms)
    )


def parse_pp(text: str) -> PPFormula:
    """Parse exactly one formula."""
    stream = _TokenStream(_tokenize(text))
    formula = _parse_formula(stream)
    trailing = stream.peek()
    if trailing is not None:
        raise ParseError(
            f"unexpected trailing input {trailing.text!r}",
            line=trailing.line,
            column=trailing.column,
        )
    return formula


def parse_pp_file(text: str) -> tuple[PPFormula, ...]:
    """Parse a sequence of formulas (each starting with "def")."""
    stream = _TokenStream(_tokenize(text))
    out = []
    while stream.peek() is not None:
        out.append(_parse_formula(stream))
    return tuple(out)


def _atom_table(
    atom: Atom, env: dict[str, Relation], domain: Domain
) -> tuple[list[str], set[tuple[int, ...]]]:
    """Variables (first occurrence order, deduplicated) and satisfying rows."""
    if isinstance(atom, EqualityAtom):
        if atom.left == atom.right:
            return [atom.left], {(a,) for a in domain.elements()}
        return [atom.left, atom.right], {(a, a) for a in domain.elements()}
    rel = env.get(atom.relation)
    if rel is None:
        raise ValueError(f"unbound relation name: {atom.relation}")
    if rel.arity != len(atom.variables):
        raise ValueError(
            f"relation {atom.relation} has arity {rel.arity}, "
            f"atom supplies {len(atom.variables)} variables"
        )
    cols: list[str] = []
    keep: list[int] = []
    first_at: dict[str, int] = {}
    for j, v in enumerate(atom.variables):
        if v not in first_at:
            first_at[v] = j
            cols.append(v)
            keep.append(j)
    rows = set()
    for t in rel.tuples:
        if all(t[j] == t[first_at[v]] for j, v in enumerate(atom.variables)):
            rows.add(tuple(t[j] for j in keep))
    return cols, rows


def _join(
    left: tuple[list[str], set[tuple[int, ...]]],
    right: tuple[list[str], set[tuple[int, ...]]],
) -> tuple[list[str], set[tuple[int, ...]]]:
    lvars, lrows = left
    rvars, rrows = right
    common = [v for v in rvars if v in lvars]
    lpos = [lvars.index(v) for v in common]
    rpos = [rvars.index(v) for v in common]
    extra = [j for j, v in enumerate(rvars) if v not in lvars]
    index: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for row in rrows:
        index.setdefault(tuple(row[j] for j in rpos), []).append(tuple(row[j] for j in extra))
    out = set()
    for row in lrows:
        for tail in index.get(tuple(row[j] for j in lpos), ()):
            out.add(row + tail)
    return lvars + [rvars[j] for j in extra], out


def eval_pp(formula: PPFormula, env: RelationSet, domain: Domain) -> Relation:
    """Evaluate by joining atoms left to right, then projecting onto the
    free variables.  Free variables constrained by no atom range over the
    whole domain."""
    named: dict[str, Relation] = {}
    for r in env:
        if r.name:
            named[r.name] = r
    for r in env:
        if r.domain != domain:
            raise ValueError("environment relation over a different domain")
    vars_cur: list[str] = []
    rows_cur: set[tuple[int, ...]] = {()}
    for atom in formula.atoms:
        vars_cur, rows_cur = _join((vars_cur, rows_cur), _atom_table(atom, named, domain))
    for v in formula.free_vars:
        if v not in vars_cur:
            vars_cur = vars_cur + [v]
            rows_cur = {row + (a,) for row in rows_cur for a in domain.elements()}
    positions = [vars_cur.index(v) for v in formula.free_vars]
    tuples = {tuple(row[p] for p in positions) for row in rows_cur}
    return Relation(domain, formula.arity, tuple(tuples), name=formula.name)


def pp_closure_of(r: Relation, rels: RelationSet, *, limits: Limits = DEFAULT_LIMITS) -> Relation:
    """Least relation of r's arity containing r and invariant under every
    operation preserving all of rels.

    Computed as the row-wise image of r's tuples under pol(rels, t) with
    t = len(r): the t-ary preserving operations applied coordinatewise to
    the t rows enumerate exactly the generated invariant superset.  An
    empty r uses the arity-0 preserving operations, whose constant tuples
    are forced into any invariant superset.
    """
    if r.domain != rels.domain:
        raise ValueError("relation and environment over different domains")
    t = len(r)
    ops = pol(rels, t, include_nullary=True, limits=limits)
    rows = r.tuples
    out = set(rows)
    for f in ops:
        table = f.table
        d = r.domain.size
        image = []
        for j in range(r.arity):
            cell = 0
            for row in rows:
                cell = cell * d + row[j]
            image.append(table[cell])
        out.add(tuple(image))
    return Relation(r.domain, r.arity, tuple(out), name=r.name)


def is_pp_definable(r: Relation, rels: RelationSet, *, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff r equals its own invariant closure over rels."""
    return pp_closure_of(r, rels, limits=limits) == r
