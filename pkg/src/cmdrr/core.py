"""Domain model for complete mixed doubles round robin tournaments.

A CMDRR(n, k) schedules mixed doubles games for n men and n women, k of
whom form married couples that never share a court.  Players are named by
sex and 1-based index (M3, F7); every public interface keeps that
numbering.

The matrix view puts males on rows and females on columns: cell (i, j)
holds the partnership opposing Mi/Fj in the game where those two partner,
and is empty exactly at spouse cells when the schedule is complete.  Each
game therefore occupies two mirrored cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import AmbiguousCell, InconsistentMatrix, InvalidParams, MissingGame

MALE = "M"
FEMALE = "F"


class PlayerRef(NamedTuple):
    """One player, e.g. PlayerRef('M', 3) prints as M3."""

    sex: str
    index: int

    def __str__(self) -> str:
        return f"{self.sex}{self.index}"


@dataclass(frozen=True, order=True)
class Partnership:
    """A man and woman playing on the same side of the net."""

    male: int
    female: int

    def __str__(self) -> str:
        return f"M{self.male}F{self.female}"


@dataclass(frozen=True, order=True)
class Game:
    """An unordered pair of partnerships with four distinct players.

    Sides are stored in canonical order (lexicographically smaller
    partnership first), so two games built from opposite side orders
    compare equal.
    """

    side_a: Partnership
    side_b: Partnership

    def __post_init__(self):
        if self.side_a.male == self.side_b.male or self.side_a.female == self.side_b.female:
            raise InvalidParams(f"game {self.side_a} v {self.side_b} repeats a player")
        if self.side_b < self.side_a:
            lo, hi = self.side_b, self.side_a
            object.__setattr__(self, "side_a", lo)
            object.__setattr__(self, "side_b", hi)

    @property
    def players(self) -> tuple[PlayerRef, ...]:
        return (
            PlayerRef(MALE, self.side_a.male),
            PlayerRef(FEMALE, self.side_a.female),
            PlayerRef(MALE, self.side_b.male),
            PlayerRef(FEMALE, self.side_b.female),
        )

    def __str__(self) -> str:
        return f"{self.side_a} v {self.side_b}"


def game(m1: int, f1: int, m2: int, f2: int) -> Game:
    """Shorthand for Game(Partnership(m1, f1), Partnership(m2, f2))."""
    return Game(Partnership(m1, f1), Partnership(m2, f2))


@dataclass(frozen=True)
class TournamentParams:
    """Size and spouse matching of a tournament candidate.

    ``spouses`` is a partial matching: no male or female index appears in
    two couples.  The parity condition (n - k even) is deliberately not
    enforced here so that malformed candidates can still be represented
    and then rejected by the verifier.
    """

    n: int
    spouses: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParams(f"n must be >= 1, got {self.n}")
        males = [m for m, _ in self.spouses]
        females = [f for _, f in self.spouses]
        for idx in males + females:
            if not 1 <= idx <= self.n:
                raise InvalidParams(f"spouse index {idx} outside 1..{self.n}")
        if len(set(males)) != len(males) or len(set(females)) != len(females):
            raise InvalidParams("spouses must form a partial matching")

    @property
    def k(self) -> int:
        return len(self.spouses)

    def spouse_of_male(self, m: int) -> int | None:
        for sm, sf in self.spouses:
            if sm == m:
                return sf
        return None

    def male_has_spouse(self, m: int) -> bool:
        return any(sm == m for sm, _ in self.spouses)

    def female_has_spouse(self, f: int) -> bool:
        return any(sf == f for _, sf in self.spouses)


def params(n: int, spouses: Iterable[tuple[int, int]] = ()) -> TournamentParams:
    return TournamentParams(n, frozenset(spouses))


@dataclass(frozen=True)
class Schedule:
    """A tournament candidate: parameters plus a sequence of games.

    Construction rejects structural nonsense (player indices out of
    range, duplicate games) but not semantic defects such as spouses
    sharing a game; those are the verifier's job, so that near-miss
    candidates can be inspected and repaired.
    """

    params: TournamentParams
    games: tuple[Game, ...]

    def __post_init__(self):
        n = self.params.n
        seen: set[Game] = set()
        for g in self.games:
            for p in (g.side_a, g.side_b):
                if not (1 <= p.male <= n and 1 <= p.female <= n):
                    raise InvalidParams(f"game {g} uses a player outside 1..{n}")
            if g in seen:
                raise InvalidParams(f"duplicate game {g}")
            seen.add(g)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    def game_set(self) -> frozenset[Game]:
        return frozenset(self.games)


@dataclass(frozen=True)
class ScheduleMatrix:
    """Matrix view of a schedule: cells[i][j] is the opposing partnership
    of the game partnering M(i+1)/F(j+1), or None.

    Only the shape is validated here; mirror consistency and the
    empty-iff-spouse rule are checked by :func:`schedule_from_matrix`,
    which knows the spouse set.
    """

    n: int
    cells: tuple[tuple[Partnership | None, ...], ...]

    def __post_init__(self):
        if len(self.cells) != self.n or any(len(row) != self.n for row in self.cells):
            raise InvalidParams(f"matrix must be {self.n}x{self.n}")

    def cell(self, i: int, j: int) -> Partnership | None:
        """1-based access."""
        return self.cells[i - 1][j - 1]


@dataclass(frozen=True)
class OppositionProfile:
    """Exact incidence counts for a game set.

    All matrices are (n+1) x (n+1) with row/column 0 unused, so that
    ``male_opp[2, 3]`` reads like the players it talks about.  Each game
    adds one male-male opposition, one female-female opposition, two
    cross-sex oppositions and two partnerships.
    """

    n: int
    male_opp: np.ndarray
    female_opp: np.ndarray
    cross_opp: np.ndarray
    cross_partner: np.ndarray


def expected_game_count(n: int, k: int) -> int:
    """Number of games a complete CMDRR(n, k) must have: (n^2 - k) / 2."""
    if not (0 <= k <= n):
        raise InvalidParams(f"need 0 <= k <= n, got n={n} k={k}")
    if (n - k) % 2 != 0:
        raise InvalidParams(f"n - k must be even, got n={n} k={k}")
    return (n * n - k) // 2


def opposition_profile(s: Schedule) -> OppositionProfile:
    """Count every opposition and partnership incidence of ``s``."""
    n = s.n
    mm = np.zeros((n + 1, n + 1), dtype=int)
    ff = np.zeros((n + 1, n + 1), dtype=int)
    xo = np.zeros((n + 1, n + 1), dtype=int)
    xp = np.zeros((n + 1, n + 1), dtype=int)
    for g in s.games:
        a, b = g.side_a, g.side_b
        mm[a.male, b.male] += 1
        mm[b.male, a.male] += 1
        ff[a.female, b.female] += 1
        ff[b.female, a.female] += 1
        xo[a.male, b.female] += 1
        xo[b.male, a.female] += 1
        xp[a.male, a.female] += 1
        xp[b.male, b.female] += 1
    for arr in (mm, ff, xo, xp):
        arr.flags.writeable = False
    return OppositionProfile(n, mm, ff, xo, xp)


def matrix_from_schedule(s: Schedule) -> ScheduleMatrix:
    """Build the matrix view; raises AmbiguousCell if a partnership recurs."""
    n = s.n
    cells: list[list[Partnership | None]] = [[None] * n for _ in range(n)]
    for g in s.games:
        for mine, other in ((g.side_a, g.side_b), (g.side_b, g.side_a)):
            i, j = mine.male, mine.female
            if cells[i - 1][j - 1] is not None:
                raise AmbiguousCell(f"partnership M{i}F{j} appears in two games")
            cells[i - 1][j - 1] = other
    return ScheduleMatrix(n, tuple(tuple(row) for row in cells))


def schedule_from_matrix(m: ScheduleMatrix, spouses: Iterable[tuple[int, int]]) -> Schedule:
    """Invert the matrix view.

    Raises InconsistentMatrix when a cell and its mirror disagree (or a
    spouse cell is occupied) and MissingGame when a non-spouse cell is
    empty.
    """
    spouse_set = frozenset(spouses)
    n = m.n
    games: list[Game] = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            opp = m.cell(i, j)
            if opp is None:
                if (i, j) not in spouse_set:
                    raise MissingGame(f"cell M{i}F{j} is empty but they are not spouses")
                continue
            if (i, j) in spouse_set:
                raise InconsistentMatrix(f"spouse cell M{i}F{j} holds an entry")
            mirror = m.cell(opp.male, opp.female)
            if mirror != Partnership(i, j):
                raise InconsistentMatrix(
                    f"cell M{i}F{j} -> {opp} but cell {opp} -> {mirror}"
                )
            if (i, j) < (opp.male, opp.female):
                games.append(Game(Partnership(i, j), opp))
    return Schedule(TournamentParams(n, spouse_set), tuple(games))


def canonicalize(s: Schedule) -> Schedule:
    """Relabel players so the spouse couples become (M1,F1)..(Mk,Fk).

    Spouses are numbered in increasing order of the husband's original
    index; the remaining players keep their relative order.  Validity and
    the repeat-opposition structure are invariant under this relabeling.
    """
    n = s.n
    spouse_list = sorted(s.params.spouses)
    male_map = {}
    female_map = {}
    for new_idx, (m, f) in enumerate(spouse_list, start=1):
        male_map[m] = new_idx
        female_map[f] = new_idx
    next_idx = len(spouse_list) + 1
    for m in range(1, n + 1):
        if m not in male_map:
            male_map[m] = next_idx
            next_idx += 1
    next_idx = len(spouse_list) + 1
    for f in range(1, n + 1):
        if f not in female_map:
            female_map[f] = next_idx
            next_idx += 1

    def relabel(p: Partnership) -> Partnership:
        return Partnership(male_map[p.male], female_map[p.female])

    new_games = tuple(Game(relabel(g.side_a), relabel(g.side_b)) for g in s.games)
    new_spouses = frozenset((male_map[m], female_map[f]) for m, f in s.params.spouses)
    return Schedule(TournamentParams(n, new_spouses), new_games)


def is_canonical(s: Schedule) -> bool:
    """True when every spouse couple already has matching indices 1..k."""
    return s.params.spouses == frozenset((i, i) for i in range(1, s.k + 1))
