"""Finite domains, operation tables, relations, and preservation.

Conventions used everywhere in the package:

* the domain is {0, ..., d-1};
* an n-ary operation is stored as its full value table of length d^n,
  inputs enumerated in lexicographic order with the FIRST coordinate most
  significant;
* a relation is a canonically sorted, deduplicated tuple set;
* a partition of {0, ..., k-1} stores blocks sorted by minimum element.

All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True)
class Domain:
    """Carrier set {0, ..., size-1}."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
            raise ValueError(f"domain size must be a positive integer, got {self.size!r}")

    def elements(self) -> range:
        return range(self.size)

    def tuples(self, arity: int) -> Iterator[tuple[int, ...]]:
        """All tuples of the given arity, in lexicographic order."""
        if arity < 0:
            raise ValueError(f"arity must be nonnegative, got {arity}")
        return product(range(self.size), repeat=arity)

    def tuple_index(self, t: Sequence[int]) -> int:
        """Lexicographic rank of t among tuples of its length."""
        idx = 0
        for a in t:
            idx = idx * self.size + a
        return idx

    def tuple_at(self, arity: int, index: int) -> tuple[int, ...]:
        """Inverse of tuple_index for the given arity."""
        if not 0 <= index < self.size**arity:
            raise ValueError(f"index {index} out of range for arity {arity}")
        out = [0] * arity
        for pos in range(arity - 1, -1, -1):
            index, out[pos] = divmod(index, self.size)
        return tuple(out)


def _check_values(values: Iterable[int], size: int, what: str) -> None:
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < size:
            raise ValueError(f"{what} contains {v!r}, not a domain element of size {size}")


@dataclass(frozen=True)
class Operation:
    """A finitary operation given by its full value table.

    The name is a label for display and file round-trips; equality and
    hashing use only (domain, arity, table).
    """

    domain: Domain
    arity: int
    table: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(self.table))
        if not isinstance(self.arity, int) or self.arity < 0:
            raise ValueError(f"arity must be a nonnegative integer, got {self.arity!r}")
        expected = self.domain.size**self.arity
        if len(self.table) != expected:
            raise ValueError(
                f"table for arity {self.arity} on domain size {self.domain.size} "
                f"needs {expected} entries, got {len(self.table)}"
            )
        _check_values(self.table, self.domain.size, "table")

    def apply(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise ValueError(f"operation of arity {self.arity} applied to {len(args)} arguments")
        _check_values(args, self.domain.size, "arguments")
        return self.table[self.domain.tuple_index(args)]

    def __call__(self, *args: int) -> int:
        return self.apply(args)

    def renamed(self, name: str) -> "Operation":
        return replace(self, name=name)


@dataclass(frozen=True)
class Relation:
    """A finitary relation as a canonical tuple set.

    Input tuples are deduplicated and sorted on construction, so two
    relations are equal iff they have the same domain, arity, and tuple
    set.  The name is display-only, as for Operation.
    """

    domain: Domain
    arity: int
    tuples: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.arity, int) or self.arity < 0:
            raise ValueError(f"arity must be a nonnegative integer, got {self.arity!r}")
        canon = sorted({tuple(t) for t in self.tuples})
        for t in canon:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} has length {len(t)}, expected arity {self.arity}")
            _check_values(t, self.domain.size, f"tuple {t}")
        object.__setattr__(self, "tuples", tuple(canon))

    def __contains__(self, t: Sequence[int]) -> bool:
        return tuple(t) in set(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.tuples)

    @property
    def is_empty(self) -> bool:
        return not self.tuples

    @property
    def is_full(self) -> bool:
        return len(self.tuples) == self.domain.size**self.arity

    @classmethod
    def full(cls, domain: Domain, arity: int, name: str = "") -> "Relation":
        return cls(domain, arity, tuple(domain.tuples(arity)), name=name)

    @classmethod
    def empty(cls, domain: Domain, arity: int, name: str = "") -> "Relation":
        return cls(domain, arity, (), name=name)

    def renamed(self, name: str) -> "Relation":
        return replace(self, name=name)


@dataclass(frozen=True)
class Partition:
    """A partition of the index set {0, ..., index_size-1}.

    Canonical form: each block ascending, blocks ordered by minimum
    element.  Refinement is the lattice order: p.refines(q) means every
    block of p sits inside a block of q, so the bottom element is the
    all-singletons partition and the top is the one-block partition.
    """

    index_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.index_size, int) or self.index_size < 1:
            raise ValueError(f"index_size must be a positive integer, got {self.index_size!r}")
        canon = sorted(tuple(sorted(b)) for b in self.blocks)
        seen: set[int] = set()
        for b in canon:
            if not b:
                raise ValueError("empty block in partition")
            for x in b:
                if not isinstance(x, int) or not 0 <= x < self.index_size:
                    raise ValueError(f"block element {x!r} outside index set of size {self.index_size}")
                if x in seen:
                    raise ValueError(f"index {x} appears in two blocks")
                seen.add(x)
        if len(seen) != self.index_size:
            raise ValueError("blocks do not cover the index set")
        object.__setattr__(self, "blocks", tuple(canon))

    @classmethod
    def bottom(cls, index_size: int) -> "Partition":
        return cls(index_size, tuple((i,) for i in range(index_size)))

    @classmethod
    def top(cls, index_size: int) -> "Partition":
        return cls(index_size, (tuple(range(index_size)),))

    def block_of(self) -> dict[int, int]:
        """Map each index to the position of its block in canonical order."""
        out: dict[int, int] = {}
        for pos, b in enumerate(self.blocks):
            for x in b:
                out[x] = pos
        return out

    def refines(self, other: "Partition") -> bool:
        """True iff self is finer than or equal to other."""
        if self.index_size != other.index_size:
            raise ValueError("partitions over different index sets")
        where = other.block_of()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def join(self, other: "Partition") -> "Partition":
        """Least partition coarser than both (transitive closure of the union)."""
        if self.index_size != other.index_size:
            raise ValueError("partitions over different index sets")
        parent = list(range(self.index_size))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for b in self.blocks + other.blocks:
            for x in b[1:]:
                parent[find(b[0])] = find(x)
        groups: dict[int, list[int]] = {}
        for i in range(self.index_size):
            groups.setdefault(find(i), []).append(i)
        return Partition(self.index_size, tuple(tuple(g) for g in groups.values()))

    def meet(self, other: "Partition") -> "Partition":
        """Greatest partition finer than both (pairwise block intersections)."""
        if self.index_size != other.index_size:
            raise ValueError("partitions over different index sets")
        mine, theirs = self.block_of(), other.block_of()
        groups: dict[tuple[int, int], list[int]] = {}
        for i in range(self.index_size):
            groups.setdefault((mine[i], theirs[i]), []).append(i)
        return Partition(self.index_size, tuple(tuple(g) for g in groups.values()))


def make_projection(domain: Domain, arity: int, index: int, name: str | None = None) -> Operation:
    """The arity-ary projection onto the given coordinate."""
    if arity < 1:
        raise ValueError(f"projection arity must be at least 1, got {arity}")
    if not 0 <= index < arity:
        raise ValueError(f"projection index {index} out of range for arity {arity}")
    table = tuple(t[index] for t in domain.tuples(arity))
    return Operation(domain, arity, table, name=name if name is not None else f"pr{index}_{arity}")


def compose(f: Operation, gs: Sequence[Operation], arity: int | None = None) -> Operation:
    """Superposition f(g_0(args), ..., g_{m-1}(args)).

    All of gs must share one arity, which becomes the result arity; when
    f is nullary gs is empty and the result arity must be passed
    explicitly.
    """
    if len(gs) != f.arity:
        raise ValueError(f"operation of arity {f.arity} composed with {len(gs)} inner operations")
    for g in gs:
        if g.domain != f.domain:
            raise ValueError("composition across different domains")
    if gs:
        inner = {g.arity for g in gs}
        if len(inner) != 1:
            raise ValueError(f"inner operations have mixed arities {sorted(inner)}")
        n = inner.pop()
        if arity is not None and arity != n:
            raise ValueError(f"declared arity {arity} does not match inner arity {n}")
    else:
        if arity is None:
            raise ValueError("composing a nullary operation requires an explicit result arity")
        n = arity
    d = f.domain.size
    ftab = f.table
    tables = [g.table for g in gs]
    out = []
    for p in range(d**n):
        idx = 0
        for tab in tables:
            idx = idx * d + tab[p]
        out.append(ftab[idx])
    return Operation(f.domain, n, tuple(out))


def preserves(f: Operation, r: Relation) -> bool:
    """True iff f applied row-wise to any tuples of r lands back in r.

    Exhaustive over all len(r)^arity(f) row choices.  A nullary f has one
    (empty) row choice, so it preserves r iff r contains the constant
    tuple of f's value; in particular no nullary operation preserves an
    empty relation.
    """
    if f.domain != r.domain:
        raise ValueError("operation and relation over different domains")
    m = f.arity
    table = f.table
    tset = set(r.tuples)
    if m == 0:
        return tuple(table[0] for _ in range(r.arity)) in tset
    if not r.tuples:
        return True
    d = f.domain.size
    # Pre-scale each row once per argument position so the inner loop is
    # a C-level zip/sum instead of nested index arithmetic.
    scaled = [[tuple(x * d ** (m - 1 - i) for x in t) for t in r.tuples] for i in range(m)]
    rng = range(len(r.tuples))
    for combo in product(rng, repeat=m):
        cols = zip(*(scaled[i][ri] for i, ri in enumerate(combo)))
        if tuple(table[sum(c)] for c in cols) not in tset:
            return False
    return True


def kernel_partition(t: Sequence[int]) -> Partition:
    """Partition of positions of t grouping equal values."""
    if len(t) == 0:
        raise ValueError("kernel of the empty tuple is undefined")
    groups: dict[int, list[int]] = {}
    for i, v in enumerate(t):
        groups.setdefault(v, []).append(i)
    return Partition(len(t), tuple(tuple(g) for g in groups.values()))
