"""Latin square substrate: plain, self-orthogonal, orthogonal pairs, and
holey variants with an optional symmetric mate.

A holey square partitions its index set 1..n into holes; cells whose row
and column fall in the same hole stay empty, each row/column carries
every symbol outside its own hole exactly once, and the ordered pairs
(entry(i,j), entry(j,i)) over filled cells never repeat.  Size-1 holes
leave their diagonal cell empty.

Verifiers come in two forms: a boolean, and a reporting form returning
up to ten violation messages per kind so garbage input stays bounded.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd

from .errors import InvalidInput, InvalidParams, NoMolsExist, ShapeError, UnsupportedOrder

_REPORT_CAP = 10


@dataclass(frozen=True)
class LatinSquare:
    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ShapeError(f"square must be {self.n}x{self.n}")

    def cell(self, i: int, j: int) -> int:
        """1-based access."""
        return self.entries[i - 1][j - 1]


@dataclass(frozen=True)
class HoleStructure:
    """A partition of 1..n into holes (disjoint and spanning)."""

    n: int
    holes: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for h in self.holes:
            if not h:
                raise InvalidParams("empty hole")
            if h & seen:
                raise InvalidParams("holes must be disjoint")
            seen |= h
        if seen != set(range(1, self.n + 1)):
            raise InvalidParams(f"holes must span 1..{self.n}")

    def hole_of(self, idx: int) -> int:
        for pos, h in enumerate(self.holes):
            if idx in h:
                return pos
        raise InvalidParams(f"index {idx} outside 1..{self.n}")

    def hole_map(self) -> dict[int, int]:
        out = {}
        for pos, h in enumerate(self.holes):
            for idx in h:
                out[idx] = pos
        return out

    def type_signature(self) -> Counter:
        """Multiset of hole sizes, e.g. {1: 6, 3: 1, 2: 1}."""
        return Counter(len(h) for h in self.holes)

    def type_string(self) -> str:
        sig = self.type_signature()
        return " ".join(f"{size}^{count}" for size, count in sorted(sig.items()))

    def is_block_diagonal(self) -> bool:
        """Every hole is a run of consecutive indices and holes appear in order."""
        expected = 1
        for h in self.holes:
            lo, hi = min(h), max(h)
            if lo != expected or hi - lo + 1 != len(h):
                return False
            expected = hi + 1
        return True


@dataclass(frozen=True)
class HolyLatinSquare:
    """A holey self-orthogonal latin square (frame SOLS)."""

    n: int
    holes: HoleStructure
    entries: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        if self.holes.n != self.n:
            raise ShapeError("hole structure order differs from square order")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ShapeError(f"square must be {self.n}x{self.n}")

    def cell(self, i: int, j: int) -> int | None:
        return self.entries[i - 1][j - 1]


@dataclass(frozen=True)
class SymmetricMate:
    """Symmetric holey latin square paired with an HSOLS; its symbols act
    as round numbers when the pair is turned into a tournament."""

    n: int
    holes: HoleStructure
    entries: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        if self.holes.n != self.n:
            raise ShapeError("hole structure order differs from square order")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ShapeError(f"square must be {self.n}x{self.n}")

    def cell(self, i: int, j: int) -> int | None:
        return self.entries[i - 1][j - 1]


@dataclass(frozen=True)
class Hsolssom:
    square: HolyLatinSquare
    mate: SymmetricMate

    def __post_init__(self):
        if self.square.n != self.mate.n or self.square.holes != self.mate.holes:
            raise ShapeError("square and mate must share order and hole structure")

    @property
    def n(self) -> int:
        return self.square.n

    @property
    def holes(self) -> HoleStructure:
        return self.square.holes


@dataclass(frozen=True)
class MolsPair:
    first: LatinSquare
    second: LatinSquare

    def __post_init__(self):
        if self.first.n != self.second.n:
            raise ShapeError("orthogonal pair must share the order")

    @property
    def n(self) -> int:
        return self.first.n


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

def latin_violations(sq: LatinSquare) -> list[str]:
    out: list[str] = []
    full = set(range(1, sq.n + 1))
    for i, row in enumerate(sq.entries, start=1):
        if set(row) != full and len(out) < _REPORT_CAP:
            out.append(f"row {i} is not a permutation of 1..{sq.n}")
    for j in range(sq.n):
        col = {row[j] for row in sq.entries}
        if col != full and len(out) < _REPORT_CAP:
            out.append(f"column {j + 1} is not a permutation of 1..{sq.n}")
    return out


def sols_violations(sq: LatinSquare) -> list[str]:
    out = latin_violations(sq)
    seen: set[tuple[int, int]] = set()
    for i in range(1, sq.n + 1):
        for j in range(1, sq.n + 1):
            pair = (sq.cell(i, j), sq.cell(j, i))
            if pair in seen:
                if len(out) < 2 * _REPORT_CAP:
                    out.append(f"pair {pair} repeats at ({i},{j}); not orthogonal to transpose")
            seen.add(pair)
    return out


def mols_violations(p: MolsPair) -> list[str]:
    out = latin_violations(p.first) + latin_violations(p.second)
    pairs = Counter()
    for i in range(1, p.n + 1):
        for j in range(1, p.n + 1):
            pairs[(p.first.cell(i, j), p.second.cell(i, j))] += 1
    clashes = [pr for pr, c in pairs.items() if c > 1]
    for pr in clashes[:_REPORT_CAP]:
        out.append(f"superimposed pair {pr} occurs {pairs[pr]} times")
    return out


def hsols_violations(h: HolyLatinSquare) -> list[str]:
    out: list[str] = []
    hole_map = h.holes.hole_map()
    full = set(range(1, h.n + 1))

    def check_line(idx: int, values: list[int | None], label: str):
        nonlocal out
        allowed = full - h.holes.holes[hole_map[idx]]
        present = [v for v in values if v is not None]
        if len(out) < _REPORT_CAP and (len(present) != len(allowed) or set(present) != allowed):
            out.append(f"{label} {idx} must carry each symbol outside its hole exactly once")

    for i in range(1, h.n + 1):
        row = list(h.entries[i - 1])
        for j in range(1, h.n + 1):
            same_hole = hole_map[i] == hole_map[j]
            empty = h.cell(i, j) is None
            if same_hole != empty and len(out) < _REPORT_CAP:
                out.append(f"cell ({i},{j}) must be {'empty' if same_hole else 'filled'}")
        check_line(i, row, "row")
    for j in range(1, h.n + 1):
        check_line(j, [h.entries[i][j - 1] for i in range(h.n)], "column")

    seen: set[tuple[int, int]] = set()
    dup_reported = 0
    for i in range(1, h.n + 1):
        for j in range(1, h.n + 1):
            a, b = h.cell(i, j), h.cell(j, i)
            if a is None or b is None:
                continue
            if (a, b) in seen and dup_reported < _REPORT_CAP:
                out.append(f"pair ({a},{b}) repeats at ({i},{j}); not self-orthogonal")
                dup_reported += 1
            seen.add((a, b))
    return out


def hsolssom_violations(hs: Hsolssom) -> list[str]:
    out = hsols_violations(hs.square)
    mate, holes = hs.mate, hs.holes
    hole_map = holes.hole_map()
    full = set(range(1, hs.n + 1))

    for i in range(1, hs.n + 1):
        for j in range(i, hs.n + 1):
            if mate.cell(i, j) != mate.cell(j, i) and len(out) < 2 * _REPORT_CAP:
                out.append(f"mate not symmetric at ({i},{j})")
        allowed = full - holes.holes[hole_map[i]]
        present = [v for v in mate.entries[i - 1] if v is not None]
        if len(present) != len(allowed) or set(present) != allowed:
            if len(out) < 2 * _REPORT_CAP:
                out.append(f"mate row {i} must carry each symbol outside its hole exactly once")
        for j in range(1, hs.n + 1):
            same_hole = hole_map[i] == hole_map[j]
            if (mate.cell(i, j) is None) != same_hole and len(out) < 2 * _REPORT_CAP:
                out.append(f"mate cell ({i},{j}) must be {'empty' if same_hole else 'filled'}")

    # Superimposed (square, mate) pairs must hit each cross-hole symbol
    # pair exactly once.
    expected = {
        (a, b)
        for a in range(1, hs.n + 1)
        for b in range(1, hs.n + 1)
        if hole_map[a] != hole_map[b]
    }
    got = Counter()
    for i in range(1, hs.n + 1):
        for j in range(1, hs.n + 1):
            a, b = hs.square.cell(i, j), mate.cell(i, j)
            if a is not None and b is not None:
                got[(a, b)] += 1
    bad = [pr for pr, c in got.items() if c > 1 or pr not in expected]
    bad += [pr for pr in expected if pr not in got]
    for pr in bad[:_REPORT_CAP]:
        out.append(f"superimposition misses or repeats symbol pair {pr}")
    return out


def verify_latin(sq: LatinSquare) -> bool:
    return not latin_violations(sq)


def verify_sols(sq: LatinSquare) -> bool:
    return not sols_violations(sq)


def verify_mols(p: MolsPair) -> bool:
    return not mols_violations(p)


def verify_hsols(h: HolyLatinSquare) -> bool:
    return not hsols_violations(h)


def verify_hsolssom(hs: Hsolssom) -> bool:
    return not hsolssom_violations(hs)


# ---------------------------------------------------------------------------
# direct constructions
# ---------------------------------------------------------------------------

def cyclic_sols(n: int) -> LatinSquare:
    """Self-orthogonal square entry(i,j) = 2i - j (mod n); needs gcd(n,6)=1.

    The diagonal is idempotent (cell (i,i) = i), which lets the square be
    reinterpreted as a holey square with n size-1 holes.
    """
    if n < 1 or gcd(n, 6) != 1:
        raise UnsupportedOrder(
            f"no cyclic self-orthogonal square of order {n}; supply one from data"
        )
    rows = tuple(
        tuple((2 * i - j) % n + 1 for j in range(n))
        for i in range(n)
    )
    return LatinSquare(n, rows)


def cyclic_mols(n: int) -> MolsPair:
    """Orthogonal pair (i+j, 2i+j) mod n for odd n."""
    if n in (2, 6):
        raise NoMolsExist(f"no orthogonal pair of order {n} exists")
    if n < 1 or n % 2 == 0:
        raise UnsupportedOrder(f"cyclic orthogonal pair needs odd order, got {n}")
    first = tuple(tuple((i + j) % n + 1 for j in range(n)) for i in range(n))
    second = tuple(tuple((2 * i + j) % n + 1 for j in range(n)) for i in range(n))
    return MolsPair(LatinSquare(n, first), LatinSquare(n, second))


def hsols_from_sols(sq: LatinSquare) -> HolyLatinSquare:
    """View an idempotent self-orthogonal square as holey with n size-1 holes."""
    for i in range(1, sq.n + 1):
        if sq.cell(i, i) != i:
            raise InvalidInput("square must have an idempotent diagonal to be viewed as holey")
    holes = HoleStructure(sq.n, tuple(frozenset({i}) for i in range(1, sq.n + 1)))
    entries = tuple(
        tuple(None if i == j else sq.entries[i][j] for j in range(sq.n))
        for i in range(sq.n)
    )
    return HolyLatinSquare(sq.n, holes, entries)


def to_block_diagonal(h: HolyLatinSquare) -> HolyLatinSquare:
    """Relabel indices (and symbols identically) so each hole occupies a
    consecutive block, holes ordered by their smallest original index."""
    if h.holes.is_block_diagonal():
        return h
    perm: dict[int, int] = {}
    nxt = 1
    ordered = sorted(h.holes.holes, key=min)
    for hole in ordered:
        for idx in sorted(hole):
            perm[idx] = nxt
            nxt += 1
    entries: list[list[int | None]] = [[None] * h.n for _ in range(h.n)]
    for i in range(1, h.n + 1):
        for j in range(1, h.n + 1):
            v = h.cell(i, j)
            if v is not None:
                entries[perm[i] - 1][perm[j] - 1] = perm[v]
    sizes = [len(hole) for hole in ordered]
    holes: list[frozenset[int]] = []
    start = 1
    for size in sizes:
        holes.append(frozenset(range(start, start + size)))
        start += size
    return HolyLatinSquare(h.n, HoleStructure(h.n, tuple(holes)), tuple(tuple(r) for r in entries))
