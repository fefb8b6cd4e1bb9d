"""Constructive routes from latin structures to tournaments.

* a self-orthogonal square of order n gives a spouse-avoiding
  tournament on n couples (the classic correspondence);
* a holey self-orthogonal square plus one tournament per hole gives a
  larger tournament by filling each hole with a translated copy;
* a tournament, a spouse-avoiding tournament and an orthogonal pair of
  squares multiply into a tournament on the product player set;
* a holey square with a symmetric mate additionally hands out round
  numbers, so the filled tournament arrives already resolved.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .core import Game, Partnership, Schedule, TournamentParams, is_canonical
from .errors import (
    ConstructionFailed,
    FillerMismatch,
    InvalidFiller,
    InvalidInput,
    ShapeError,
    WrongType,
)
from .latin import Hsolssom, HolyLatinSquare, LatinSquare, MolsPair, to_block_diagonal
from .latin import verify_hsols, verify_hsolssom, verify_mols, verify_sols
from .resolver import Resolution
from .verifier import Classification, verify


def unit_cmdrr() -> Schedule:
    """The degenerate CMDRR(1,1): one couple, no games.  First-class as a
    hole filler of size 1."""
    return Schedule(TournamentParams(1, frozenset({(1, 1)})), ())


def samdrr_from_sols(sq: LatinSquare) -> Schedule:
    """Spouse-avoiding tournament of the square's order.

    Each unordered index pair i < j yields the game
    Mi F(sq[i,j]) v Mj F(sq[j,i]); couples share their index.
    """
    if not verify_sols(sq):
        raise InvalidInput("square is not self-orthogonal")
    n = sq.n
    games = tuple(
        Game(Partnership(i, sq.cell(i, j)), Partnership(j, sq.cell(j, i)))
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )
    spouses = frozenset((i, i) for i in range(1, n + 1))
    return Schedule(TournamentParams(n, spouses), games)


def _translated(filler: Schedule, offsets: Sequence[int]) -> tuple[tuple[Game, ...], frozenset[tuple[int, int]]]:
    """Map filler player p to offsets[p-1] for both sexes."""

    def move(p: Partnership) -> Partnership:
        return Partnership(offsets[p.male - 1], offsets[p.female - 1])

    games = tuple(Game(move(g.side_a), move(g.side_b)) for g in filler.games)
    spouses = frozenset((offsets[m - 1], offsets[f - 1]) for m, f in filler.params.spouses)
    return games, spouses


def _square_games(h: HolyLatinSquare) -> list[Game]:
    hole_map = h.holes.hole_map()
    games = []
    for i in range(1, h.n + 1):
        for j in range(i + 1, h.n + 1):
            if hole_map[i] == hole_map[j]:
                continue
            games.append(Game(Partnership(i, h.cell(i, j)), Partnership(j, h.cell(j, i))))
    return games


def fill_hsols(h: HolyLatinSquare, fillers: Sequence[Schedule]) -> Schedule:
    """Fill each hole of a holey self-orthogonal square with a tournament
    of the hole's size.

    ``fillers[p]`` fills hole p after the square is brought to block
    diagonal form (holes ordered by smallest index, relabeled to
    consecutive runs).  The result has one game per cross-hole index
    pair plus every translated filler game; its spouse count is the sum
    of the fillers' spouse counts.
    """
    if not verify_hsols(h):
        raise InvalidInput("holey square fails verification")
    h = to_block_diagonal(h)
    if len(fillers) != len(h.holes.holes):
        raise FillerMismatch(
            f"{len(h.holes.holes)} holes but {len(fillers)} fillers"
        )
    games = _square_games(h)
    spouses: set[tuple[int, int]] = set()
    for hole, filler in zip(h.holes.holes, fillers):
        size = len(hole)
        if filler.n != size:
            raise FillerMismatch(f"hole of size {size} got a filler of order {filler.n}")
        if not verify(filler).valid:
            raise InvalidFiller(f"filler for hole {sorted(hole)} is not a valid tournament")
        offsets = sorted(hole)
        hole_games, hole_spouses = _translated(filler, offsets)
        games.extend(hole_games)
        spouses |= hole_spouses
    return Schedule(TournamentParams(h.n, frozenset(spouses)), tuple(games))


def product(base: Schedule, samdrr: Schedule, mols: MolsPair) -> Schedule:
    """Product tournament on players (i, j), i in the base, j in the
    spouse-avoiding one, flattened as (j-1)*n + i.

    Copy j of the base contributes its games verbatim (type 1); every
    game of the spouse-avoiding schedule is spread over all n^2 cells of
    the orthogonal pair (type 2).
    """
    n, m = base.n, samdrr.n
    if mols.n != n:
        raise ShapeError(f"orthogonal pair order {mols.n} must equal base order {n}")
    if not verify_mols(mols):
        raise InvalidInput("orthogonal pair fails verification")
    base_report = verify(base)
    if not base_report.valid:
        raise InvalidInput("base schedule is not a valid tournament")
    if not is_canonical(base):
        raise InvalidInput("base must be in canonical spouse form; canonicalize it first")
    samdrr_report = verify(samdrr)
    if samdrr_report.classification is not Classification.SAMDRR:
        raise InvalidInput("second factor must be a spouse-avoiding tournament")
    if not is_canonical(samdrr):
        raise InvalidInput("spouse-avoiding factor must be in canonical spouse form")

    def flat(i: int, j: int) -> int:
        return (j - 1) * n + i

    games: list[Game] = []
    for g in base.games:
        for j in range(1, m + 1):
            games.append(
                Game(
                    Partnership(flat(g.side_a.male, j), flat(g.side_a.female, j)),
                    Partnership(flat(g.side_b.male, j), flat(g.side_b.female, j)),
                )
            )
    for g in samdrr.games:
        w, x = g.side_a.male, g.side_a.female
        y, z = g.side_b.male, g.side_b.female
        for i1 in range(1, n + 1):
            for i2 in range(1, n + 1):
                i3 = mols.first.cell(i1, i2)
                i4 = mols.second.cell(i1, i2)
                games.append(
                    Game(
                        Partnership(flat(i1, w), flat(i2, x)),
                        Partnership(flat(i3, y), flat(i4, z)),
                    )
                )
    spouses = frozenset(
        (flat(i, j), flat(i, j)) for i, _ in base.params.spouses for j in range(1, m + 1)
    )
    return Schedule(TournamentParams(m * n, spouses), tuple(games))


# ---------------------------------------------------------------------------
# resolved tournaments from a holey square with symmetric mate
# ---------------------------------------------------------------------------

def _mate_round_games(hs: Hsolssom) -> tuple[list[Game], list[int]]:
    """Games from the square's cross-hole cells, each stamped with the
    mate's symbol as its round."""
    hole_map = hs.holes.hole_map()
    games: list[Game] = []
    rounds: list[int] = []
    for i in range(1, hs.n + 1):
        for j in range(i + 1, hs.n + 1):
            if hole_map[i] == hole_map[j]:
                continue
            games.append(
                Game(
                    Partnership(i, hs.square.cell(i, j)),
                    Partnership(j, hs.square.cell(j, i)),
                )
            )
            rounds.append(hs.mate.cell(i, j))
    return games, rounds


def _pair_block(a: int, b: int) -> tuple[tuple[Game, int], tuple[Game, int]]:
    """The two games on players {Ma, Mb, Fa, Fb}: the aligned one plays in
    round a, the crossed one in round b."""
    aligned = Game(Partnership(a, a), Partnership(b, b))
    crossed = Game(Partnership(a, b), Partnership(b, a))
    return (aligned, a), (crossed, b)


def resolvable_from_hsolssom2(hs: Hsolssom) -> tuple[Schedule, Resolution]:
    """Fully resolved tournament without spouses from a holey square of
    type 2^m with symmetric mate: 2m full rounds, no short round.

    Each size-2 hole {a, b} is missing exactly from rounds a and b, and
    the four players Ma, Mb, Fa, Fb idle there; the two games on those
    players fill the gap.
    """
    if not verify_hsolssom(hs):
        raise InvalidInput("holey square with mate fails verification")
    if any(len(h) != 2 for h in hs.holes.holes):
        raise WrongType(f"need hole type 2^m, got {hs.holes.type_string()}")
    games, rounds = _mate_round_games(hs)
    for hole in hs.holes.holes:
        a, b = sorted(hole)
        for g, r in _pair_block(a, b):
            games.append(g)
            rounds.append(r)
    schedule = Schedule(TournamentParams(hs.n, frozenset()), tuple(games))
    return schedule, Resolution(hs.n, tuple(rounds))


def cmdrr3n_from_hsolssom3(hs: Hsolssom, filler: Schedule | None = None) -> tuple[Schedule, Resolution]:
    """Resolved tournament from a holey square of type 3^m (m odd, >= 5)
    with symmetric mate: 3m full rounds plus one short round of m games.

    Each size-3 hole gets a translated 6-player tournament with one
    couple; three of its four games drop into the three rounds missing
    the hole's players and the leftovers collect into round 3m + 1.  The
    game-to-round assignment is found by trying the 24 permutations per
    hole until the rounds stay player-disjoint.
    """
    if not verify_hsolssom(hs):
        raise InvalidInput("holey square with mate fails verification")
    sizes = {len(h) for h in hs.holes.holes}
    m = len(hs.holes.holes)
    if sizes != {3} or m % 2 == 0 or m < 5:
        raise WrongType(
            f"need hole type 3^m with m odd and m >= 5, got {hs.holes.type_string()}"
        )
    if filler is None:
        from .catalog import load

        filler = load("C31").payload
    if filler.n != 3 or not verify(filler).valid or filler.k != 1:
        raise InvalidFiller("hole filler must be a valid 6-player tournament with one couple")

    games, rounds = _mate_round_games(hs)
    extra_round = 3 * m + 1
    used_in_round: dict[int, set] = {}
    for g, r in zip(games, rounds):
        used_in_round.setdefault(r, set()).update(g.players)

    spouses: set[tuple[int, int]] = set()
    for hole in hs.holes.holes:
        offsets = sorted(hole)
        hole_games, hole_spouses = _translated(filler, offsets)
        spouses |= hole_spouses
        slots = offsets + [extra_round]
        placed = None
        for perm in permutations(range(4)):
            ok = True
            for game_idx, slot_idx in enumerate(perm):
                r = slots[slot_idx]
                players = set(hole_games[game_idx].players)
                if players & used_in_round.get(r, set()):
                    ok = False
                    break
            if ok:
                placed = perm
                break
        if placed is None:
            raise ConstructionFailed(f"no round assignment works for hole {offsets}")
        for game_idx, slot_idx in enumerate(placed):
            r = slots[slot_idx]
            games.append(hole_games[game_idx])
            rounds.append(r)
            used_in_round.setdefault(r, set()).update(hole_games[game_idx].players)

    schedule = Schedule(TournamentParams(hs.n, frozenset(spouses)), tuple(games))
    return schedule, Resolution(extra_round, tuple(rounds))
