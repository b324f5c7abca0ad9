"""Weighted partitions of a finite ground set and their DP operators.

Partitions are canonicalized as restricted-growth codes over a sorted ground
tuple, so equality and hashing are O(|U|) and iteration order is stable.
The solvers run on the bare code dictionaries via the module-private helpers;
the Partition / WeightedPartitionSet classes wrap the same helpers.

`reduce` keeps, per weight-sorted scan, the entries whose rows in the GF(2)
cut matrix (columns = bipartitions of U fixing the first element) are linearly
independent; the output represents the input for every extension partition.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import CapacityError, ContractError

INF = math.inf

REDUCE_WIDTH_LIMIT = 30


# ---------------------------------------------------------------------------
# code-level helpers (positions 0..n-1 into a sorted ground tuple)


def _canon(labels: Iterable[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    out = []
    for x in labels:
        i = relabel.get(x)
        if i is None:
            relabel[x] = i = len(relabel)
        out.append(i)
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _join_codes(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    n = len(a)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first_a: dict[int, int] = {}
    first_b: dict[int, int] = {}
    for i in range(n):
        la, lb = a[i], b[i]
        j = first_a.setdefault(la, i)
        if j != i:
            parent[find(i)] = find(j)
        j = first_b.setdefault(lb, i)
        if j != i:
            parent[find(i)] = find(j)
    return _canon(find(i) for i in range(n))


def _meet_codes(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return _canon(zip(a, b))


def _coarsens_codes(p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    # every block of q inside a single block of p
    seen: dict[int, int] = {}
    for lp, lq in zip(p, q):
        prev = seen.setdefault(lq, lp)
        if prev != lp:
            return False
    return True


@lru_cache(maxsize=1 << 18)
def _glue_codes(code: tuple[int, ...], positions: tuple[int, ...]) -> tuple[int, ...]:
    if not positions:
        return code
    merged = {code[i] for i in positions}
    target = min(merged)
    return _canon(target if x in merged else x for x in code)


@lru_cache(maxsize=1 << 18)
def _project_codes(code: tuple[int, ...], positions: tuple[int, ...]) -> tuple[int, ...] | None:
    """Drop the given positions; None when a dropped block loses all members."""
    dropped = set(positions)
    kept_labels = {code[i] for i in range(len(code)) if i not in dropped}
    for i in dropped:
        if code[i] not in kept_labels:
            return None
    return _canon(code[i] for i in range(len(code)) if i not in dropped)


@lru_cache(maxsize=1 << 18)
def _expand_code(code: tuple[int, ...], old_positions: tuple[int, ...], new_size: int) -> tuple[int, ...]:
    """Embed a code into a larger ground; fresh positions get singleton blocks."""
    labels = [-1] * new_size
    for lab, pos in zip(code, old_positions):
        labels[pos] = lab
    nxt = max(code, default=-1) + 1
    for i in range(new_size):
        if labels[i] == -1:
            labels[i] = nxt
            nxt += 1
    return _canon(labels)


def _is_single_block(code: tuple[int, ...]) -> bool:
    return all(x == 0 for x in code)


def _block_count(code: tuple[int, ...]) -> int:
    return max(code) + 1 if code else 0


def _rmc_merge(target: dict[tuple[int, ...], int], code: tuple[int, ...], w: int) -> None:
    old = target.get(code)
    if old is None or w < old:
        target[code] = w


def _all_codes(n: int) -> Iterator[tuple[int, ...]]:
    # restricted-growth strings enumerated lexicographically
    if n == 0:
        yield ()
        return
    code = [0] * n

    def rec(i: int, mx: int):
        if i == n:
            yield tuple(code)
            return
        for lab in range(mx + 2):
            code[i] = lab
            yield from rec(i + 1, max(mx, lab))

    yield from rec(1, 0)


# ---------------------------------------------------------------------------
# reduce on bare code dictionaries


def _cut_row(code: tuple[int, ...], n: int) -> int:
    """Row of the GF(2) cut matrix: bit c set iff the cut with column key c
    (membership mask of elements 1..n-1 on the side of element 0) splits no
    block of the partition."""
    block_masks: dict[int, int] = {}
    for i in range(1, n):
        block_masks[code[i]] = block_masks.get(code[i], 0) | (1 << (i - 1))
    base = block_masks.pop(code[0], 0)
    sides = [base]
    for mask in block_masks.values():
        sides += [s | mask for s in sides]
    row = 0
    for s in sides:
        row |= 1 << s
    return row


def reduce_codes(entries: Mapping[tuple[int, ...], int], n: int) -> dict[tuple[int, ...], int]:
    if n > REDUCE_WIDTH_LIMIT:
        raise CapacityError(f"ground set of size {n} exceeds the reduce width limit {REDUCE_WIDTH_LIMIT}")
    if len(entries) <= 1 or n <= 2:
        # Bell(n) <= 2^(n-1) for n <= 2, so nothing can be dropped
        return dict(entries)
    basis: dict[int, int] = {}
    kept: dict[tuple[int, ...], int] = {}
    for code, w in sorted(entries.items(), key=lambda it: (it[1], it[0])):
        row = _cut_row(code, n)
        while row:
            pivot = row.bit_length() - 1
            other = basis.get(pivot)
            if other is None:
                basis[pivot] = row
                kept[code] = w
                break
            row ^= other
    return kept


# ---------------------------------------------------------------------------
# public wrappers


class Partition:
    """A canonical partition of a sorted ground tuple."""

    __slots__ = ("ground", "code")

    def __init__(self, ground: Iterable[int], code: Iterable[int]):
        g = tuple(ground)
        if list(g) != sorted(set(g)):
            raise ContractError("ground must be sorted and duplicate-free")
        c = tuple(code)
        if len(c) != len(g):
            raise ContractError("code length must match ground size")
        if c != _canon(c):
            raise ContractError("code is not in restricted-growth form")
        self.ground = g
        self.code = c

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        label: dict[int, int] = {}
        for i, block in enumerate(blocks):
            for x in block:
                if x in label:
                    raise ContractError(f"element {x} appears in two blocks")
                label[x] = i
        ground = tuple(sorted(label))
        return cls(ground, _canon(label[x] for x in ground))

    @classmethod
    def bottom(cls, ground: Iterable[int]) -> "Partition":
        g = tuple(sorted(set(ground)))
        return cls(g, range(len(g)))

    @classmethod
    def single_block(cls, ground: Iterable[int]) -> "Partition":
        g = tuple(sorted(set(ground)))
        return cls(g, (0,) * len(g))

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(_block_count(self.code))]
        for x, lab in zip(self.ground, self.code):
            out[lab].append(x)
        return tuple(tuple(b) for b in out)

    @property
    def block_count(self) -> int:
        return _block_count(self.code)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.ground == other.ground and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.ground, self.code))

    def __repr__(self) -> str:
        return "Partition(" + " | ".join(",".join(map(str, b)) for b in self.blocks()) + ")"


def all_partitions(ground: Iterable[int]) -> Iterator[Partition]:
    g = tuple(sorted(set(ground)))
    for code in _all_codes(len(g)):
        yield Partition(g, code)


def _check_same_ground(p: Partition, q: Partition) -> None:
    if p.ground != q.ground:
        raise ContractError("ground sets differ")


def coarsens(p: Partition, q: Partition) -> bool:
    """True iff every block of q is contained in some block of p."""
    _check_same_ground(p, q)
    return _coarsens_codes(p.code, q.code)


def join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening."""
    _check_same_ground(p, q)
    return Partition(p.ground, _join_codes(p.code, q.code))


def meet(p: Partition, q: Partition) -> Partition:
    """Blockwise intersections, empty intersections dropped."""
    _check_same_ground(p, q)
    return Partition(p.ground, _meet_codes(p.code, q.code))


def project_down(p: Partition, keep: Iterable[int]) -> Partition:
    keep_set = set(keep)
    if not keep_set <= set(p.ground):
        raise ContractError("projection target is not a subset of the ground")
    kept = tuple(i for i, x in enumerate(p.ground) if x in keep_set)
    return Partition(
        tuple(x for x in p.ground if x in keep_set),
        _canon(p.code[i] for i in kept),
    )


def lift_up(p: Partition, ground: Iterable[int]) -> Partition:
    new_ground = tuple(sorted(set(ground)))
    if not set(p.ground) <= set(new_ground):
        raise ContractError("lift target must contain the ground")
    index = {x: i for i, x in enumerate(new_ground)}
    old_positions = tuple(index[x] for x in p.ground)
    return Partition(new_ground, _expand_code(p.code, old_positions, len(new_ground)))


class WeightedPartitionSet:
    """A map from canonical partitions of one ground set to edge-count weights."""

    __slots__ = ("ground", "_codes")

    def __init__(
        self,
        ground: Iterable[int],
        entries: Mapping[Partition, int] | Iterable[tuple[Partition, int]] = (),
    ):
        self.ground = tuple(sorted(set(ground)))
        codes: dict[tuple[int, ...], int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for p, w in items:
            if p.ground != self.ground:
                raise ContractError("entry ground differs from the set ground")
            if w < 0:
                raise ContractError("weights must be non-negative")
            _rmc_merge(codes, p.code, w)
        self._codes = codes

    @classmethod
    def _from_codes(cls, ground: tuple[int, ...], codes: dict[tuple[int, ...], int]) -> "WeightedPartitionSet":
        obj = cls.__new__(cls)
        obj.ground = ground
        obj._codes = codes
        return obj

    def items(self) -> list[tuple[Partition, int]]:
        return [
            (Partition(self.ground, code), w)
            for code, w in sorted(self._codes.items())
        ]

    def weight_of(self, p: Partition) -> int | None:
        if p.ground != self.ground:
            raise ContractError("ground sets differ")
        return self._codes.get(p.code)

    def codes(self) -> dict[tuple[int, ...], int]:
        return dict(self._codes)

    def __len__(self) -> int:
        return len(self._codes)

    def __bool__(self) -> bool:
        return bool(self._codes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedPartitionSet):
            return NotImplemented
        return self.ground == other.ground and self._codes == other._codes

    def __repr__(self) -> str:
        body = ", ".join(f"{Partition(self.ground, c)!r}: {w}" for c, w in sorted(self._codes.items()))
        return f"WeightedPartitionSet({{{body}}})"


def opt(q: Partition, a: WeightedPartitionSet) -> int | float:
    """Minimum weight over entries whose join with q has a single block; INF if none."""
    if q.ground != a.ground:
        raise ContractError("ground sets differ")
    best: int | float = INF
    if not a.ground:
        for w in a._codes.values():
            best = min(best, w)
        return best
    for code, w in a._codes.items():
        if w < best and _is_single_block(_join_codes(code, q.code)):
            best = w
    return best


def op_union(a: WeightedPartitionSet, b: WeightedPartitionSet) -> WeightedPartitionSet:
    if a.ground != b.ground:
        raise ContractError("ground sets differ")
    codes = dict(a._codes)
    for code, w in b._codes.items():
        _rmc_merge(codes, code, w)
    return WeightedPartitionSet._from_codes(a.ground, codes)


def op_insert(new_elements: Iterable[int], a: WeightedPartitionSet) -> WeightedPartitionSet:
    xs = set(new_elements)
    if xs & set(a.ground):
        raise ContractError("inserted elements must be disjoint from the ground")
    ground = tuple(sorted(set(a.ground) | xs))
    index = {x: i for i, x in enumerate(ground)}
    old_positions = tuple(index[x] for x in a.ground)
    codes = {
        _expand_code(code, old_positions, len(ground)): w
        for code, w in a._codes.items()
    }
    return WeightedPartitionSet._from_codes(ground, codes)


def op_shift(delta: int, a: WeightedPartitionSet) -> WeightedPartitionSet:
    codes = {}
    for code, w in a._codes.items():
        if w + delta < 0:
            raise ContractError("shift would make a weight negative")
        codes[code] = w + delta
    return WeightedPartitionSet._from_codes(a.ground, codes)


def op_glue(glue_set: Iterable[int], a: WeightedPartitionSet, delta: int = 0) -> WeightedPartitionSet:
    xs = set(glue_set)
    ground = tuple(sorted(set(a.ground) | xs))
    if ground != a.ground:
        index = {x: i for i, x in enumerate(ground)}
        old_positions = tuple(index[x] for x in a.ground)
        base = {
            _expand_code(code, old_positions, len(ground)): w
            for code, w in a._codes.items()
        }
    else:
        base = a._codes
    positions = tuple(i for i, x in enumerate(ground) if x in xs)
    codes: dict[tuple[int, ...], int] = {}
    for code, w in base.items():
        if w + delta < 0:
            raise ContractError("glue shift would make a weight negative")
        _rmc_merge(codes, _glue_codes(code, positions), w + delta)
    return WeightedPartitionSet._from_codes(ground, codes)


def op_project(drop: Iterable[int], a: WeightedPartitionSet) -> WeightedPartitionSet:
    xs = set(drop)
    if not xs <= set(a.ground):
        raise ContractError("projected elements must lie in the ground")
    ground = tuple(x for x in a.ground if x not in xs)
    positions = tuple(i for i, x in enumerate(a.ground) if x in xs)
    codes: dict[tuple[int, ...], int] = {}
    for code, w in a._codes.items():
        kept = _project_codes(code, positions)
        if kept is not None:
            _rmc_merge(codes, kept, w)
    return WeightedPartitionSet._from_codes(ground, codes)


def op_join(a: WeightedPartitionSet, b: WeightedPartitionSet) -> WeightedPartitionSet:
    ground = tuple(sorted(set(a.ground) | set(b.ground)))
    index = {x: i for i, x in enumerate(ground)}

    def lifted(s: WeightedPartitionSet) -> dict[tuple[int, ...], int]:
        if s.ground == ground:
            return s._codes
        old_positions = tuple(index[x] for x in s.ground)
        return {
            _expand_code(code, old_positions, len(ground)): w
            for code, w in s._codes.items()
        }

    ac, bc = lifted(a), lifted(b)
    codes: dict[tuple[int, ...], int] = {}
    for ca, wa in ac.items():
        for cb, wb in bc.items():
            _rmc_merge(codes, _join_codes(ca, cb), wa + wb)
    return WeightedPartitionSet._from_codes(ground, codes)


def reduce(a: WeightedPartitionSet) -> WeightedPartitionSet:
    """Representative subset of size at most 2^(|U|-1) preserving every opt value."""
    return WeightedPartitionSet._from_codes(a.ground, reduce_codes(a._codes, len(a.ground)))


def brute_force_opt(q: Partition, a: WeightedPartitionSet) -> int | float:
    """Definitional opt by scanning every entry (test oracle)."""
    if q.ground != a.ground:
        raise ContractError("ground sets differ")
    best: int | float = INF
    for p, w in a.items():
        if join(p, q).block_count <= 1 and w < best:
            best = w
    return best
