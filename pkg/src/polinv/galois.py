"""The two Galois maps between operation sets and relation sets.

inv enumerates every relation of a given arity preserved by all given
operations (full 2^(d^k) subset sweep, capped); pol enumerates every
operation of a given arity preserving all given relations (depth-first
table construction with forward pruning, checked against a brute-force
filter).  invariant_closure generates the least invariant superset of a
seed tuple set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .clones import OperationSet
from .core import Domain, Operation, Relation, preserves
from .errors import ResourceBoundError
from .limits import DEFAULT_LIMITS, Limits

# Above this many precomputed row combinations pol switches from the
# backtracking route to the filter route; see _pol_filter.
_BACKTRACK_COMBO_BUDGET = 200_000


@dataclass(frozen=True)
class RelationSet:
    """A duplicate-free set of relations over one domain.

    Canonical order: by arity, then lexicographically by tuple list.
    First name wins on duplicates, as in OperationSet.
    """

    domain: Domain
    rels: tuple[Relation, ...]

    def __post_init__(self) -> None:
        seen: dict[tuple[int, tuple[tuple[int, ...], ...]], Relation] = {}
        for r in self.rels:
            if r.domain != self.domain:
                raise ValueError(f"relation {r.name or r.tuples} over a different domain")
            seen.setdefault((r.arity, r.tuples), r)
        canon = sorted(seen.values(), key=lambda r: (r.arity, r.tuples))
        object.__setattr__(self, "rels", tuple(canon))

    def __iter__(self) -> Iterator[Relation]:
        return iter(self.rels)

    def __len__(self) -> int:
        return len(self.rels)

    def __contains__(self, r: Relation) -> bool:
        return any(s == r for s in self.rels)

    def arity_members(self, arity: int) -> tuple[Relation, ...]:
        return tuple(r for r in self.rels if r.arity == arity)

    def union(self, other: "RelationSet") -> "RelationSet":
        if other.domain != self.domain:
            raise ValueError("union across different domains")
        return RelationSet(self.domain, self.rels + other.rels)


def _guard_enumeration(count: int, what: str, limits: Limits) -> None:
    if count > limits.max_candidates:
        raise ResourceBoundError(f"{what} needs {count} candidates, cap is {limits.max_candidates}")


def _make_checker(f: Operation, all_tuples: list[tuple[int, ...]], domain: Domain) -> Callable:
    """Build a fast mask-level preservation check for one operation.

    Tuples of the relation arity are identified with their lexicographic
    ranks; a candidate relation is a bitmask over ranks.
    """
    d = domain.size
    k = len(all_tuples[0])
    m = f.arity
    table = f.table
    if m == 0:
        diag = domain.tuple_index((table[0],) * k)
        return lambda mask, rows: bool(mask >> diag & 1)
    if m == 1:
        out1 = [domain.tuple_index(tuple(table[v] for v in t)) for t in all_tuples]

        def check1(mask: int, rows: list[int]) -> bool:
            for i in rows:
                if not mask >> out1[i] & 1:
                    return False
            return True

        return check1
    if m == 2:
        out2 = []
        for t1 in all_tuples:
            row = []
            for t2 in all_tuples:
                idx = 0
                for a, b in zip(t1, t2):
                    idx = idx * d + table[a * d + b]
                row.append(idx)
            out2.append(row)

        def check2(mask: int, rows: list[int]) -> bool:
            for i in rows:
                oi = out2[i]
                for j in rows:
                    if not mask >> oi[j] & 1:
                        return False
            return True

        return check2

    def check_general(mask: int, rows: list[int]) -> bool:
        for combo in product(rows, repeat=m):
            out = 0
            for j in range(k):
                cell = 0
                for ri in combo:
                    cell = cell * d + all_tuples[ri][j]
                out = out * d + table[cell]
            if not mask >> out & 1:
                return False
        return True

    return check_general


def inv(
    ops: OperationSet,
    arity: int,
    *,
    include_nullary: bool = False,
    limits: Limits = DEFAULT_LIMITS,
) -> RelationSet:
    """Every relation of the given arity preserved by all members of ops.

    Sweeps all 2^(d^arity) candidate tuple sets; an empty ops set
    therefore yields every relation of that arity.
    """
    if arity < 0:
        raise ValueError(f"arity must be nonnegative, got {arity}")
    if arity == 0 and not include_nullary:
        raise ValueError("relation arity 0 requires include_nullary")
    domain = ops.domain
    size = domain.size**arity
    if size > limits.max_materialize:
        raise ResourceBoundError(
            f"relations of arity {arity} hold up to {size} tuples, "
            f"materialization cap is {limits.max_materialize}"
        )
    _guard_enumeration(2**size, f"inv at arity {arity}", limits)
    all_tuples = list(domain.tuples(arity))
    checkers = [_make_checker(f, all_tuples, domain) for f in ops]
    found = []
    for mask in range(2**size):
        rows = [i for i in range(size) if mask >> i & 1]
        if all(check(mask, rows) for check in checkers):
            found.append(Relation(domain, arity, tuple(all_tuples[i] for i in rows)))
    return RelationSet(domain, tuple(found))


def _pol_backtracking(
    rels: RelationSet, arity: int, domain: Domain
) -> list[tuple[int, ...]]:
    """Depth-first assignment of table cells in lexicographic order.

    A partial table is rejected as soon as some row combination whose
    output cells are all assigned lands outside its relation.  Each
    combination is checked exactly once, at the node assigning its
    highest-indexed cell.
    """
    d = domain.size
    cells = d**arity
    constraints: list[tuple[set[tuple[int, ...]], dict[int, list[tuple[int, ...]]]]] = []
    for r in rels:
        tset = set(r.tuples)
        by_trigger: dict[int, list[tuple[int, ...]]] = {}
        for combo in product(r.tuples, repeat=arity):
            vec = []
            for j in range(r.arity):
                cell = 0
                for t in combo:
                    cell = cell * d + t[j]
                vec.append(cell)
            by_trigger.setdefault(max(vec, default=0), []).append(tuple(vec))
        constraints.append((tset, by_trigger))

    table = [0] * cells
    results: list[tuple[int, ...]] = []

    def extend(c: int) -> None:
        for v in range(d):
            table[c] = v
            ok = True
            for tset, by_trigger in constraints:
                for vec in by_trigger.get(c, ()):
                    if tuple(table[x] for x in vec) not in tset:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                if c + 1 == cells:
                    results.append(tuple(table))
                else:
                    extend(c + 1)

    extend(0)
    return results


def _pol_filter(rels: RelationSet, arity: int, domain: Domain) -> list[tuple[int, ...]]:
    """Enumerate all d^(d^arity) tables and keep the preserving ones."""
    d = domain.size
    found = []
    for table in product(range(d), repeat=d**arity):
        op = Operation(domain, arity, table)
        if all(preserves(op, r) for r in rels):
            found.append(table)
    return found


def pol(
    rels: RelationSet,
    arity: int,
    *,
    include_nullary: bool = False,
    limits: Limits = DEFAULT_LIMITS,
) -> OperationSet:
    """Every operation of the given arity preserving all members of rels.

    An empty rels set yields every table.  Result order is canonical
    (tables ascending); both internal routes produce the identical set.
    """
    if arity < 0:
        raise ValueError(f"arity must be nonnegative, got {arity}")
    if arity == 0 and not include_nullary:
        raise ValueError("operation arity 0 requires include_nullary")
    domain = rels.domain
    cells = domain.size**arity
    if cells > limits.max_materialize:
        raise ResourceBoundError(
            f"tables of arity {arity} hold {cells} entries, "
            f"materialization cap is {limits.max_materialize}"
        )
    _guard_enumeration(domain.size**cells, f"pol at arity {arity}", limits)
    total_combos = sum(len(r) ** arity for r in rels)
    _guard_enumeration(total_combos, f"pol constraints at arity {arity}", limits)
    if total_combos > _BACKTRACK_COMBO_BUDGET:
        tables = _pol_filter(rels, arity, domain)
    else:
        tables = _pol_backtracking(rels, arity, domain)
    return OperationSet(domain, tuple(Operation(domain, arity, t) for t in tables))


def invariant_closure(
    ops: OperationSet,
    seeds: Iterable[Sequence[int]],
    arity: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> Relation:
    """Least relation of the given arity containing the seeds and closed
    under pointwise application of every member of ops."""
    domain = ops.domain
    current: set[tuple[int, ...]] = set()
    for t in seeds:
        t = tuple(t)
        if len(t) != arity:
            raise ValueError(f"seed {t} has length {len(t)}, expected arity {arity}")
        current.add(t)
    Relation(domain, arity, tuple(current))  # validates entry ranges
    while True:
        combos = sum(len(current) ** f.arity for f in ops)
        _guard_enumeration(combos, "invariant closure round", limits)
        snapshot = sorted(current)
        fresh: set[tuple[int, ...]] = set()
        for f in ops:
            d = domain.size
            table = f.table
            for combo in product(snapshot, repeat=f.arity):
                out = []
                for j in range(arity):
                    cell = 0
                    for t in combo:
                        cell = cell * d + t[j]
                    out.append(table[cell])
                tout = tuple(out)
                if tout not in current:
                    fresh.add(tout)
        if not fresh:
            return Relation(domain, arity, tuple(current))
        current |= fresh
