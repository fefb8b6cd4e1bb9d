"""Partition a schedule's games into rounds.

A round is a set of games with no shared player.  For n even a full
round uses everyone (n/2 games); for n odd it uses all but one man and
one woman ((n-1)/2 games).  A schedule is fully resolvable when its
games split into rounds with at most one short round, which pins both
the number of rounds and their sizes.

``resolve_full`` is an exact backtracking search over that forced shape
and distinguishes a proved Infeasible from a budget-limited
Inconclusive.  ``resolve_short`` targets a fixed number of games per
round via greedy seeding plus min-conflict local search, with the exact
search as a fallback on small instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .core import FEMALE, MALE, PlayerRef, Schedule
from .errors import InvalidParams, InvalidResolution

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Resolution:
    """Assignment of every game to a 1-based round number."""

    num_rounds: int
    round_of: tuple[int, ...]

    def __post_init__(self):
        for r in self.round_of:
            if not 1 <= r <= self.num_rounds:
                raise InvalidParams(f"round {r} outside 1..{self.num_rounds}")

    def rounds(self) -> list[list[int]]:
        """Game indices grouped per round (round r at position r-1)."""
        out: list[list[int]] = [[] for _ in range(self.num_rounds)]
        for g, r in enumerate(self.round_of):
            out[r - 1].append(g)
        return out


@dataclass(frozen=True)
class RoundAudit:
    games_per_round: tuple[int, ...]
    byes_per_round: tuple[tuple[PlayerRef, ...], ...]
    bye_counts: tuple[tuple[PlayerRef, int], ...]
    full_rounds: int
    short_rounds: int
    fully_resolvable: bool
    balanced_byes: bool

    def bye_count(self, p: PlayerRef) -> int:
        for q, c in self.bye_counts:
            if q == p:
                return c
        raise KeyError(p)


class ResolveStatus(Enum):
    RESOLVED = "Resolved"
    INFEASIBLE = "Infeasible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ResolveResult:
    status: ResolveStatus
    resolution: Resolution | None
    nodes: int


def full_round_size(n: int) -> int:
    return n // 2 if n % 2 == 0 else (n - 1) // 2


def verify_resolution(s: Schedule, r: Resolution) -> RoundAudit:
    """Audit a resolution; raises InvalidResolution on malformed input."""
    if len(r.round_of) != len(s.games):
        raise InvalidResolution(
            f"resolution covers {len(r.round_of)} games, schedule has {len(s.games)}"
        )
    n = s.n
    all_players = [PlayerRef(MALE, i) for i in range(1, n + 1)] + [
        PlayerRef(FEMALE, i) for i in range(1, n + 1)
    ]
    rounds = r.rounds()
    for idx, games in enumerate(rounds, start=1):
        if not games:
            raise InvalidResolution(f"round {idx} is empty")
        seen: set[PlayerRef] = set()
        for g in games:
            for p in s.games[g].players:
                if p in seen:
                    raise InvalidResolution(f"player {p} appears twice in round {idx}")
                seen.add(p)

    fsize = full_round_size(n)
    games_per_round = tuple(len(g) for g in rounds)
    byes_per_round = []
    bye_counts = {p: 0 for p in all_players}
    for games in rounds:
        playing = {p for g in games for p in s.games[g].players}
        byes = tuple(p for p in all_players if p not in playing)
        byes_per_round.append(byes)
        for p in byes:
            bye_counts[p] += 1
    full = sum(1 for c in games_per_round if c == fsize)
    short = len(rounds) - full

    spouse_byes = {
        bye_counts[PlayerRef(MALE, m)] for m, _ in s.params.spouses
    } | {bye_counts[PlayerRef(FEMALE, f)] for _, f in s.params.spouses}
    spouse_players = {PlayerRef(MALE, m) for m, _ in s.params.spouses} | {
        PlayerRef(FEMALE, f) for _, f in s.params.spouses
    }
    non_spouse_byes = {c for p, c in bye_counts.items() if p not in spouse_players}
    balanced = len(non_spouse_byes) <= 1 and len(spouse_byes) <= 1
    if balanced and non_spouse_byes and spouse_byes:
        balanced = next(iter(spouse_byes)) == next(iter(non_spouse_byes)) + 1

    return RoundAudit(
        games_per_round=games_per_round,
        byes_per_round=tuple(byes_per_round),
        bye_counts=tuple(sorted(bye_counts.items())),
        full_rounds=full,
        short_rounds=short,
        fully_resolvable=short <= 1,
        balanced_byes=balanced,
    )


def resolution_matrix(s: Schedule, r: Resolution) -> tuple[tuple[int | None, ...], ...]:
    """Round-number grid: cell (i, j) is the round where Mi partners Fj."""
    n = s.n
    grid: list[list[int | None]] = [[None] * n for _ in range(n)]
    for g, rnd in zip(s.games, r.round_of):
        for side in (g.side_a, g.side_b):
            grid[side.male - 1][side.female - 1] = rnd
    return tuple(tuple(row) for row in grid)


# ---------------------------------------------------------------------------
# exact search over rounds of forced sizes
# ---------------------------------------------------------------------------

def _game_masks(s: Schedule) -> list[int]:
    n = s.n
    masks = []
    for g in s.games:
        m = (
            (1 << (g.side_a.male - 1))
            | (1 << (g.side_b.male - 1))
            | (1 << (n + g.side_a.female - 1))
            | (1 << (n + g.side_b.female - 1))
        )
        masks.append(m)
    return masks


class _Budget(Exception):
    pass


def _backtrack_rounds(masks: list[int], caps: list[int], budget: int) -> tuple[list[int] | None, int, bool]:
    """Assign every game mask to a round respecting capacities and player
    disjointness.  Returns (assignment or None, nodes, exhausted).

    Branches on the unassigned game with the fewest feasible rounds;
    empty rounds of equal capacity are interchangeable, so only the
    first empty round per capacity class is tried.
    """
    num_games = len(masks)
    num_rounds = len(caps)
    occupancy = [0] * num_rounds
    load = [0] * num_rounds
    assign = [-1] * num_games
    nodes = 0

    def feasible_rounds(g: int) -> list[int]:
        out = []
        seen_empty_caps: set[int] = set()
        for r in range(num_rounds):
            if load[r] >= caps[r] or (occupancy[r] & masks[g]):
                continue
            if load[r] == 0:
                if caps[r] in seen_empty_caps:
                    continue
                seen_empty_caps.add(caps[r])
            out.append(r)
        return out

    def rec() -> bool:
        nonlocal nodes
        best_g, best_rounds = -1, None
        for g in range(num_games):
            if assign[g] != -1:
                continue
            rs = feasible_rounds(g)
            if best_rounds is None or len(rs) < len(best_rounds):
                best_g, best_rounds = g, rs
                if not rs:
                    return False
        if best_rounds is None:
            return True
        for r in best_rounds:
            nodes += 1
            if nodes > budget:
                raise _Budget()
            assign[best_g] = r
            occupancy[r] |= masks[best_g]
            load[r] += 1
            if rec():
                return True
            assign[best_g] = -1
            occupancy[r] &= ~masks[best_g]
            load[r] -= 1
        return False

    try:
        found = rec()
    except _Budget:
        return None, nodes, False
    return (assign if found else None), nodes, True


def resolve_full(s: Schedule, budget: int = DEFAULT_BUDGET) -> ResolveResult:
    """Exact decision: can the games split into rounds with at most one
    short round?  Infeasible is only reported after exhausting the space."""
    num_games = len(s.games)
    if num_games == 0:
        return ResolveResult(ResolveStatus.RESOLVED, Resolution(0, ()), 0)
    fsize = full_round_size(s.n)
    q, rem = divmod(num_games, fsize)
    caps = [fsize] * q + ([rem] if rem else [])
    assign, nodes, exhausted = _backtrack_rounds(_game_masks(s), caps, budget)
    if assign is not None:
        res = Resolution(len(caps), tuple(r + 1 for r in assign))
        return ResolveResult(ResolveStatus.RESOLVED, res, nodes)
    if exhausted:
        return ResolveResult(ResolveStatus.INFEASIBLE, None, nodes)
    return ResolveResult(ResolveStatus.INCONCLUSIVE, None, nodes)


# ---------------------------------------------------------------------------
# fixed games-per-round search
# ---------------------------------------------------------------------------

def _player_ids(s: Schedule, g: int) -> tuple[int, ...]:
    game = s.games[g]
    n = s.n
    return (
        game.side_a.male - 1,
        game.side_b.male - 1,
        n + game.side_a.female - 1,
        n + game.side_b.female - 1,
    )


def _local_search(
    s: Schedule, caps: list[int], budget: int, rng: random.Random
) -> tuple[list[int] | None, int]:
    """Min-conflict search over capacity-respecting states.

    Cost counts player clashes within rounds.  A step takes a clashing
    game and either moves it into a round with spare capacity or swaps it
    with a game from another round (the swap neighborhood matters: the
    tightest instances have no spare capacity at all).  Noise breaks
    plateaus; stagnation triggers a fresh greedy seed.
    """
    num_games = len(s.games)
    num_rounds = len(caps)
    players = [_player_ids(s, g) for g in range(num_games)]
    nodes = 0
    stall_limit = max(3000, 30 * num_games)
    noise = 0.05

    counts = [[0] * (2 * s.n) for _ in range(num_rounds)]
    load = [0] * num_rounds
    assign = [-1] * num_games

    def greedy_seed() -> int:
        for r in range(num_rounds):
            for p in range(2 * s.n):
                counts[r][p] = 0
            load[r] = 0
        cost = 0
        order = list(range(num_games))
        rng.shuffle(order)
        for g in order:
            best_r, best_pen = -1, None
            for r in range(num_rounds):
                if load[r] >= caps[r]:
                    continue
                pen = sum(1 for p in players[g] if counts[r][p] >= 1)
                if best_pen is None or pen < best_pen or (
                    pen == best_pen and load[r] < load[best_r]
                ):
                    best_r, best_pen = r, pen
            assign[g] = best_r
            load[best_r] += 1
            for p in players[g]:
                if counts[best_r][p] >= 1:
                    cost += 1
                counts[best_r][p] += 1
        return cost

    def round_delta(r: int, minus, plus) -> int:
        net: dict[int, int] = {}
        for p in minus:
            net[p] = net.get(p, 0) - 1
        for p in plus:
            net[p] = net.get(p, 0) + 1
        d = 0
        row = counts[r]
        for p, dv in net.items():
            c = row[p]
            d += max(0, c + dv - 1) - max(0, c - 1)
        return d

    def apply_counts(r: int, minus, plus) -> None:
        row = counts[r]
        for p in minus:
            row[p] -= 1
        for p in plus:
            row[p] += 1

    cost = greedy_seed()
    best_cost = cost
    since_improve = 0
    while nodes < budget:
        if cost == 0:
            return assign, nodes
        if since_improve > stall_limit:
            cost = greedy_seed()
            best_cost = min(best_cost, cost)
            since_improve = 0
            continue

        clashing = [
            g for g in range(num_games) if any(counts[assign[g]][p] > 1 for p in players[g])
        ]
        g = rng.choice(clashing)
        r1 = assign[g]
        candidates: list[tuple[int, int, int]] = []  # (delta, kind/round, game)
        best_delta = None

        def consider(delta: int, move) -> None:
            nonlocal best_delta, candidates
            if best_delta is None or delta < best_delta:
                best_delta = delta
                candidates = [move]
            elif delta == best_delta:
                candidates.append(move)

        for r2 in range(num_rounds):
            if r2 == r1 or load[r2] >= caps[r2]:
                continue
            nodes += 1
            delta = round_delta(r1, players[g], ()) + round_delta(r2, (), players[g])
            consider(delta, (delta, -1, r2))
        for h in range(num_games):
            r2 = assign[h]
            if r2 == r1:
                continue
            nodes += 1
            delta = round_delta(r1, players[g], players[h]) + round_delta(
                r2, players[h], players[g]
            )
            consider(delta, (delta, h, r2))

        if not candidates:
            since_improve += 1
            continue
        if best_delta is not None and best_delta >= 0 and rng.random() < noise:
            h = rng.randrange(num_games)
            while assign[h] == r1:
                h = rng.randrange(num_games)
            r2 = assign[h]
            delta = round_delta(r1, players[g], players[h]) + round_delta(
                r2, players[h], players[g]
            )
            move = (delta, h, r2)
        else:
            move = rng.choice(candidates)

        delta, h, r2 = move
        if h == -1:
            apply_counts(r1, players[g], ())
            apply_counts(r2, (), players[g])
            load[r1] -= 1
            load[r2] += 1
            assign[g] = r2
        else:
            apply_counts(r1, players[g], players[h])
            apply_counts(r2, players[h], players[g])
            assign[g], assign[h] = r2, r1
        cost += delta
        if cost < best_cost:
            best_cost = cost
            since_improve = 0
        else:
            since_improve += 1
    return None, nodes


def resolve_short(
    s: Schedule,
    games_per_round: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> ResolveResult:
    """Partition games into rounds of exactly ``games_per_round`` games,
    all but possibly the last.

    Returns Infeasible only on a provable bound (a player has more games
    than there are rounds, or the target exceeds the disjointness cap) or
    when the exact fallback exhausts a small instance; otherwise a
    Resolution or Inconclusive.
    """
    num_games = len(s.games)
    if not 1 <= games_per_round <= s.n // 2:
        raise InvalidParams(
            f"games_per_round must be in 1..{s.n // 2}, got {games_per_round}"
        )
    if num_games == 0:
        return ResolveResult(ResolveStatus.RESOLVED, Resolution(0, ()), 0)
    num_rounds = -(-num_games // games_per_round)
    rem = num_games - games_per_round * (num_rounds - 1)
    caps = [games_per_round] * (num_rounds - 1) + [rem]

    degree: dict[int, int] = {}
    for g in range(num_games):
        for p in _player_ids(s, g):
            degree[p] = degree.get(p, 0) + 1
    if max(degree.values()) > num_rounds:
        return ResolveResult(ResolveStatus.INFEASIBLE, None, 0)

    rng = random.Random(seed)
    assign, nodes = _local_search(s, caps, budget, rng)
    if assign is not None:
        # the short round, if any, is the last capacity slot
        res = Resolution(num_rounds, tuple(r + 1 for r in assign))
        return ResolveResult(ResolveStatus.RESOLVED, res, nodes)

    if num_games <= 40 and nodes < budget:
        exact, extra, exhausted = _backtrack_rounds(_game_masks(s), caps, budget - nodes)
        nodes += extra
        if exact is not None:
            res = Resolution(num_rounds, tuple(r + 1 for r in exact))
            return ResolveResult(ResolveStatus.RESOLVED, res, nodes)
        if exhausted:
            return ResolveResult(ResolveStatus.INFEASIBLE, None, nodes)
    return ResolveResult(ResolveStatus.INCONCLUSIVE, None, nodes)
