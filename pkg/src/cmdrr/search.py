"""Search for tournaments from scratch.

Both searchers fix the partnership set up front: with couples relabeled
to matching indices, every non-spouse man/woman pair partners exactly
once, so a candidate is nothing but a perfect pairing of those n^2 - k
partnerships into games with distinct men and distinct women per game.

``tabu_find`` walks that pairing space by exchanging partnerships
between two games, steering by a cost that counts every deviation from
the validity rules; cost zero is exactly a valid tournament.
``exhaustive_search`` enumerates the whole space with pruning and can
therefore certify small nonexistence results.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .core import Game, Partnership, Schedule, TournamentParams
from .errors import InvalidParams
from .verifier import verify


@dataclass(frozen=True)
class TabuParams:
    seed: int = 0
    max_iterations: int = 200_000
    tabu_tenure: int = 12
    restarts: int = 20
    # diversification knobs: chance of taking a random neighborhood move
    # instead of the best one, the stall length that triggers a restart
    # (None picks a size-based default), and how many violated games'
    # rewirings are examined per iteration
    noise: float = 0.08
    stall_limit: int | None = None
    hot_cap: int = 12

    def __post_init__(self):
        if self.max_iterations < 1 or self.tabu_tenure < 1 or self.restarts < 1:
            raise InvalidParams("tabu parameters must be positive")


class SearchStatus(Enum):
    FOUND = "Found"
    NOT_EXIST = "NotExist"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SearchStats:
    iterations: int
    best_cost: int
    nodes: int


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    schedule: Schedule | None
    stats: SearchStats


ProgressHook = Callable[[int, int], None]


class _OutOfBudget(Exception):
    pass


def _check_params(n: int, k: int) -> None:
    if n < 1 or k < 0 or k > n or (n - k) % 2 != 0:
        raise InvalidParams(f"no tournament shape for n={n} k={k}")


def _partnerships(n: int, k: int) -> list[tuple[int, int]]:
    """Every non-spouse pair, couples sitting at indices 1..k."""
    return [(m, f) for m in range(1, n + 1) for f in range(1, n + 1) if not (m == f and m <= k)]


class PairingState:
    """A pairing of the fixed partnerships into games, with incrementally
    maintained opposition counts and cost.

    Cost = sum over same-sex pairs of max(0, c - u) + max(0, 1 - c)
         + sum over non-spouse cross pairs of |opp - 1|
         + sum over spouse cross pairs of opp,
    where u is 1 when either player of the pair has a spouse and 2
    otherwise.  Cost 0 holds exactly for valid tournaments.

    Counts live in flat lists indexed ``i * (n + 1) + j``; the delta
    evaluation is the hot path, so it is written out longhand.
    """

    def __init__(self, n: int, k: int, partner: list[int]):
        self.n = n
        self.k = k
        self.pairs = _partnerships(n, k)
        self.pm = [m for m, _ in self.pairs]
        self.pf = [f for _, f in self.pairs]
        self.partner = partner
        self.stride = n + 1
        size = self.stride * self.stride
        self.mm = [0] * size
        self.ff = [0] * size
        self.xo = [0] * size
        s = self.stride
        for pid, q in enumerate(partner):
            if pid < q:
                a, b = self.pairs[pid]
                c, d = self.pairs[q]
                self.mm[a * s + c] += 1
                self.mm[c * s + a] += 1
                self.ff[b * s + d] += 1
                self.ff[d * s + b] += 1
                self.xo[a * s + d] += 1
                self.xo[c * s + b] += 1
        self.cost = self._full_cost()

    # -- cost terms ---------------------------------------------------

    def _full_cost(self) -> int:
        n, k, s = self.n, self.k, self.stride
        total = 0
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                u = 1 if (i <= k or j <= k) else 2
                for cnt in (self.mm[i * s + j], self.ff[i * s + j]):
                    total += max(0, cnt - u) + max(0, 1 - cnt)
        for m in range(1, n + 1):
            for f in range(1, n + 1):
                o = self.xo[m * s + f]
                total += o if (m == f and m <= k) else abs(o - 1)
        return total

    def _apply_game(self, pa: int, pb: int, sign: int) -> int:
        """Add or remove one game's count contributions; returns the cost
        change.  Single flat method: this is the hot path."""
        k = self.k
        s = self.stride
        a, c = self.pm[pa], self.pm[pb]
        b, d = self.pf[pa], self.pf[pb]
        mm, ff, xo = self.mm, self.ff, self.xo
        delta = 0

        u = 1 if (a <= k or c <= k) else 2
        cnt = mm[a * s + c]
        before = (cnt - u if cnt > u else 0) + (1 - cnt if cnt < 1 else 0)
        cnt += sign
        mm[a * s + c] = cnt
        mm[c * s + a] = cnt
        delta += (cnt - u if cnt > u else 0) + (1 - cnt if cnt < 1 else 0) - before

        u = 1 if (b <= k or d <= k) else 2
        cnt = ff[b * s + d]
        before = (cnt - u if cnt > u else 0) + (1 - cnt if cnt < 1 else 0)
        cnt += sign
        ff[b * s + d] = cnt
        ff[d * s + b] = cnt
        delta += (cnt - u if cnt > u else 0) + (1 - cnt if cnt < 1 else 0) - before

        o = xo[a * s + d]
        before = o if (a == d and a <= k) else (o - 1 if o > 1 else 1 - o)
        o += sign
        xo[a * s + d] = o
        delta += (o if (a == d and a <= k) else (o - 1 if o > 1 else 1 - o)) - before

        o = xo[c * s + b]
        before = o if (c == b and c <= k) else (o - 1 if o > 1 else 1 - o)
        o += sign
        xo[c * s + b] = o
        delta += (o if (c == b and c <= k) else (o - 1 if o > 1 else 1 - o)) - before

        return delta

    # -- moves ----------------------------------------------------------

    def move_delta(self, u: int, v: int) -> int | None:
        """Cost change of re-pairing so that u and v share a game (their
        current partners form the other game), or None when invalid."""
        pu, pv = self.partner[u], self.partner[v]
        pm, pf = self.pm, self.pf
        if pm[u] == pm[v] or pf[u] == pf[v] or pm[pu] == pm[pv] or pf[pu] == pf[pv]:
            return None
        ag = self._apply_game
        delta = ag(u, pu, -1)
        delta += ag(v, pv, -1)
        delta += ag(u, v, +1)
        delta += ag(pu, pv, +1)
        # revert
        ag(pu, pv, -1)
        ag(u, v, -1)
        ag(v, pv, +1)
        ag(u, pu, +1)
        return delta

    def apply_move(self, u: int, v: int) -> None:
        pu, pv = self.partner[u], self.partner[v]
        self.cost += self._apply_game(u, pu, -1)
        self.cost += self._apply_game(v, pv, -1)
        self.cost += self._apply_game(u, v, +1)
        self.cost += self._apply_game(pu, pv, +1)
        self.partner[u], self.partner[v] = v, u
        self.partner[pu], self.partner[pv] = pv, pu

    def unhappy_players(self) -> tuple[set[int], set[int]]:
        """Players appearing in any violated cost term."""
        n, k, s = self.n, self.k, self.stride
        bad_m: set[int] = set()
        bad_f: set[int] = set()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                u = 1 if (i <= k or j <= k) else 2
                c = self.mm[i * s + j]
                if c > u or c < 1:
                    bad_m.add(i)
                    bad_m.add(j)
                c = self.ff[i * s + j]
                if c > u or c < 1:
                    bad_f.add(i)
                    bad_f.add(j)
        for m in range(1, n + 1):
            for f in range(1, n + 1):
                o = self.xo[m * s + f]
                bad = (o > 0) if (m == f and m <= k) else (o != 1)
                if bad:
                    bad_m.add(m)
                    bad_f.add(f)
        return bad_m, bad_f

    def games(self) -> list[tuple[int, int]]:
        return [(pid, q) for pid, q in enumerate(self.partner) if pid < q]

    def hot_games(self) -> list[int]:
        """Representatives of games containing an unhappy player."""
        bad_m, bad_f = self.unhappy_players()
        pm, pf = self.pm, self.pf
        out = []
        for pid, q in enumerate(self.partner):
            if pid < q and (
                pm[pid] in bad_m or pm[q] in bad_m or pf[pid] in bad_f or pf[q] in bad_f
            ):
                out.append(pid)
        return out

    def to_schedule(self) -> Schedule:
        spouses = frozenset((i, i) for i in range(1, self.k + 1))
        games = tuple(
            Game(Partnership(*self.pairs[a]), Partnership(*self.pairs[b]))
            for a, b in self.games()
        )
        return Schedule(TournamentParams(self.n, spouses), games)


def random_pairing(n: int, k: int, rng: random.Random, attempts: int = 1000) -> PairingState:
    """Random perfect pairing of the partnerships: repeatedly pair the
    next unmatched partnership with a random compatible one, restarting
    on dead ends."""
    _check_params(n, k)
    pairs = _partnerships(n, k)
    count = len(pairs)
    for _ in range(attempts):
        order = list(range(count))
        rng.shuffle(order)
        partner = [-1] * count
        dead = False
        for pid in order:
            if partner[pid] != -1:
                continue
            choices = [
                q
                for q in order
                if partner[q] == -1
                and q != pid
                and pairs[pid][0] != pairs[q][0]
                and pairs[pid][1] != pairs[q][1]
            ]
            if not choices:
                dead = True
                break
            q = rng.choice(choices)
            partner[pid] = q
            partner[q] = pid
        if not dead:
            return PairingState(n, k, partner)
    raise InvalidParams(f"could not build an initial pairing for n={n} k={k}")


def _constructive_attempt(
    n: int, k: int, rng: random.Random, node_budget: int
) -> tuple[list[int] | None, list[int], int]:
    """One greedy dive with backtracking over the pairing space.

    Extends the first unpaired partnership with count-feasible mates in
    a per-attempt random order, undoing on dead ends.  Returns (complete
    partner list or None, deepest partial seen, nodes spent).  A complete
    return is a cost-0 pairing: within-bound counts plus the fixed totals
    force every count to its exact value.
    """
    pairs = _partnerships(n, k)
    count = len(pairs)
    size = n + 1
    mm = [[0] * size for _ in range(size)]
    ff = [[0] * size for _ in range(size)]
    xo = [[0] * size for _ in range(size)]
    dm = [0] * size
    df = [0] * size
    partner = [-1] * count
    value_order = list(range(count))
    rng.shuffle(value_order)
    nodes = 0
    placed = 0
    best_depth = -1
    best_partial = [-1] * count

    def try_place(pa: int, pb: int) -> bool:
        a, b = pairs[pa]
        c, d = pairs[pb]
        if a == c or b == d:
            return False
        um = 1 if (a <= k or c <= k) else 2
        if mm[a][c] + 1 > um:
            return False
        if mm[a][c] == 1 and (dm[a] or dm[c]):
            return False
        uf = 1 if (b <= k or d <= k) else 2
        if ff[b][d] + 1 > uf:
            return False
        if ff[b][d] == 1 and (df[b] or df[d]):
            return False
        for m, f in ((a, d), (c, b)):
            if m == f and m <= k:
                return False
            if xo[m][f] >= 1:
                return False
        mm[a][c] += 1
        mm[c][a] += 1
        if mm[a][c] == 2:
            dm[a] += 1
            dm[c] += 1
        ff[b][d] += 1
        ff[d][b] += 1
        if ff[b][d] == 2:
            df[b] += 1
            df[d] += 1
        xo[a][d] += 1
        xo[c][b] += 1
        return True

    def unplace(pa: int, pb: int) -> None:
        a, b = pairs[pa]
        c, d = pairs[pb]
        if mm[a][c] == 2:
            dm[a] -= 1
            dm[c] -= 1
        mm[a][c] -= 1
        mm[c][a] -= 1
        if ff[b][d] == 2:
            df[b] -= 1
            df[d] -= 1
        ff[b][d] -= 1
        ff[d][b] -= 1
        xo[a][d] -= 1
        xo[c][b] -= 1

    def rec() -> bool:
        nonlocal nodes, placed, best_depth
        pa = next((p for p in range(count) if partner[p] == -1), None)
        if pa is None:
            return True
        partner[pa] = -2  # reserved while branching
        for q in value_order:
            if partner[q] != -1 or q == pa:
                continue
            nodes += 1
            if nodes > node_budget:
                raise _OutOfBudget()
            if not try_place(pa, q):
                continue
            partner[pa] = q
            partner[q] = pa
            placed += 1
            if placed > best_depth:
                best_depth = placed
                best_partial[:] = partner
            if rec():
                return True
            placed -= 1
            partner[pa] = -2
            partner[q] = -1
            unplace(pa, q)
        partner[pa] = -1
        return False

    try:
        if rec():
            return partner, partner, nodes
    except _OutOfBudget:
        pass
    # the reserved marker of an in-flight branch must not leak
    best_partial = [(-1 if p == -2 else p) for p in best_partial]
    return None, best_partial, nodes


def _pad_partial(
    n: int, k: int, partial: list[int], rng: random.Random
) -> PairingState:
    """Complete a partial pairing by matching the leftovers compatibly at
    random; falls back to a fresh random pairing if the tail is stuck."""
    pairs = _partnerships(n, k)
    for _ in range(50):
        partner = list(partial)
        left = [p for p in range(len(pairs)) if partner[p] == -1]
        rng.shuffle(left)
        dead = False
        while left:
            pid = left.pop()
            choices = [
                q for q in left
                if pairs[pid][0] != pairs[q][0] and pairs[pid][1] != pairs[q][1]
            ]
            if not choices:
                dead = True
                break
            q = rng.choice(choices)
            left.remove(q)
            partner[pid] = q
            partner[q] = pid
        if not dead:
            return PairingState(n, k, partner)
    return random_pairing(n, k, rng)


def state_cost(s: Schedule) -> int:
    """The tabu cost of an arbitrary schedule, recomputed from scratch.

    Assumes the schedule's partnership multiset is the fixed one (every
    non-spouse pair exactly once); useful as an independent cross-check
    that cost 0 coincides with verifier validity.
    """
    n, k = s.n, s.k
    size = n + 1
    mm = [[0] * size for _ in range(size)]
    ff = [[0] * size for _ in range(size)]
    xo = [[0] * size for _ in range(size)]
    for g in s.games:
        a, b = g.side_a.male, g.side_a.female
        c, d = g.side_b.male, g.side_b.female
        mm[a][c] += 1
        mm[c][a] += 1
        ff[b][d] += 1
        ff[d][b] += 1
        xo[a][d] += 1
        xo[c][b] += 1
    spouse_m = {m for m, _ in s.params.spouses}
    spouse_f = {f for _, f in s.params.spouses}
    spouse_set = s.params.spouses
    total = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            u = 1 if (i in spouse_m or j in spouse_m) else 2
            total += max(0, mm[i][j] - u) + max(0, 1 - mm[i][j])
            u = 1 if (i in spouse_f or j in spouse_f) else 2
            total += max(0, ff[i][j] - u) + max(0, 1 - ff[i][j])
    for m in range(1, n + 1):
        for f in range(1, n + 1):
            o = xo[m][f]
            total += o if (m, f) in spouse_set else abs(o - 1)
    return total


_INIT_ATTEMPT_NODES = 250_000
_INIT_PHASE_NODES = 6_000_000


def tabu_find(
    n: int,
    k: int,
    p: TabuParams = TabuParams(),
    progress: ProgressHook | None = None,
) -> SearchOutcome:
    """Tabu search for a valid tournament with the given parameters.

    Each restart phase first builds a start state greedily: repeated
    count-feasible dives with backtracking, restarted on dead ends (a
    completed dive is already cost 0).  The exchange search then runs
    from the deepest padded build: every iteration examines the exchanges
    around games that touch a violated count and takes the best non-tabu
    one (a recently broken game may not be re-formed for ``tabu_tenure``
    iterations unless the move beats the best cost seen); with a small
    probability the step is a random neighborhood move instead.  A long
    stall moves on to the next phase, up to ``restarts`` times.
    Deterministic for a fixed seed.
    """
    _check_params(n, k)
    rng = random.Random(p.seed)
    if n * n - k == 0:
        sched = Schedule(TournamentParams(n, frozenset((i, i) for i in range(1, k + 1))), ())
        return SearchOutcome(SearchStatus.FOUND, sched, SearchStats(0, 0, 0))

    nodes = 0
    iterations = 0
    best_cost: int | None = None
    num_games = (n * n - k) // 2
    stall_limit = p.stall_limit if p.stall_limit is not None else 100 + 10 * num_games
    count = n * n - k

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def found(state: PairingState) -> SearchOutcome:
        sched = state.to_schedule()
        assert verify(sched).valid
        return SearchOutcome(SearchStatus.FOUND, sched, SearchStats(iterations, 0, nodes))

    for phase in range(p.restarts + 1):
        allowance = _INIT_PHASE_NODES
        complete = None
        deepest: list[int] | None = None
        deepest_placed = -1
        while allowance > 0 and complete is None:
            complete, partial, used = _constructive_attempt(
                n, k, rng, min(_INIT_ATTEMPT_NODES, allowance)
            )
            nodes += used
            allowance -= used
            placed = sum(1 for q in partial if q >= 0)
            if placed > deepest_placed:
                deepest_placed = placed
                deepest = partial
        if complete is not None:
            return found(PairingState(n, k, complete))
        state = _pad_partial(n, k, deepest, rng)
        if best_cost is None or state.cost < best_cost:
            best_cost = state.cost
        tabu: dict[tuple[int, int], int] = {}
        stall = 0

        while iterations < p.max_iterations and stall <= stall_limit:
            iterations += 1
            it = iterations
            if state.cost == 0:
                return found(state)

            # best exchange around the games that touch violated counts
            hot = state.hot_games()
            if len(hot) > p.hot_cap:
                hot = rng.sample(hot, p.hot_cap)
            partner = state.partner
            move_delta = state.move_delta
            candidates: list[tuple[int, int]] = []
            all_valid: list[tuple[int, int]] = []
            best_delta = None
            seen: set[tuple[int, int]] = set()
            for g in hot:
                for u in (g, partner[g]):
                    pu = partner[u]
                    for v in range(count):
                        if v == u or v == pu:
                            continue
                        mk = key(u, v)
                        if mk in seen:
                            continue
                        seen.add(mk)
                        delta = move_delta(u, v)
                        if delta is None:
                            continue
                        nodes += 1
                        all_valid.append((u, v))
                        is_tabu = (
                            tabu.get(mk, 0) >= it
                            or tabu.get(key(pu, partner[v]), 0) >= it
                        )
                        if is_tabu and state.cost + delta >= best_cost:
                            continue
                        if best_delta is None or delta < best_delta:
                            best_delta = delta
                            candidates = [(u, v)]
                        elif delta == best_delta:
                            candidates.append((u, v))

            if all_valid and (not candidates or rng.random() < p.noise):
                u, v = rng.choice(all_valid)
            elif candidates:
                u, v = rng.choice(candidates)
            else:
                stall += 1
                continue

            broken = (key(u, state.partner[u]), key(v, state.partner[v]))
            state.apply_move(u, v)
            for gk in broken:
                tabu[gk] = it + p.tabu_tenure
            if state.cost < best_cost:
                best_cost = state.cost
                stall = 0
            else:
                stall += 1

            if progress and it % 1000 == 0:
                progress(it, best_cost)

        if state.cost == 0:
            return found(state)
        if iterations >= p.max_iterations:
            break

    return SearchOutcome(
        SearchStatus.INCONCLUSIVE,
        None,
        SearchStats(iterations, -1 if best_cost is None else best_cost, nodes),
    )


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------

def exhaustive_search(
    n: int,
    k: int,
    budget: int = 10_000_000,
    allow_large: bool = False,
) -> SearchOutcome:
    """Complete backtracking over all pairings of the fixed partnerships.

    NotExist is reported only when the full space (reduced by always
    extending from the lexicographically smallest unplaced partnership)
    is exhausted within budget; otherwise Found with a witness, or
    Inconclusive.  Guarded to n <= 6 unless ``allow_large`` is set.
    """
    _check_params(n, k)
    if n > 6 and not allow_large:
        raise InvalidParams(f"n={n} exceeds the exhaustive-search guard; pass allow_large")

    pairs = _partnerships(n, k)
    count = len(pairs)
    if count == 0:
        sched = Schedule(TournamentParams(n, frozenset((i, i) for i in range(1, k + 1))), ())
        return SearchOutcome(SearchStatus.FOUND, sched, SearchStats(0, 0, 0))

    size = n + 1
    mm = [[0] * size for _ in range(size)]
    ff = [[0] * size for _ in range(size)]
    xo = [[0] * size for _ in range(size)]
    doubles_m = [0] * size
    doubles_f = [0] * size
    used = [False] * count
    chosen: list[tuple[int, int]] = []
    nodes = 0
    witness: list[tuple[int, int]] | None = None

    def try_place(pa: int, pb: int) -> bool:
        """Apply the game if no count rule is violated; False otherwise."""
        a, b = pairs[pa]
        c, d = pairs[pb]
        if a == c or b == d:
            return False
        u_m = 1 if (a <= k or c <= k) else 2
        if mm[a][c] + 1 > u_m:
            return False
        if mm[a][c] == 1 and (doubles_m[a] or doubles_m[c]):
            return False
        u_f = 1 if (b <= k or d <= k) else 2
        if ff[b][d] + 1 > u_f:
            return False
        if ff[b][d] == 1 and (doubles_f[b] or doubles_f[d]):
            return False
        for m, f in ((a, d), (c, b)):
            if m == f and m <= k:
                return False
            if xo[m][f] >= 1:
                return False
        mm[a][c] += 1
        mm[c][a] += 1
        if mm[a][c] == 2:
            doubles_m[a] += 1
            doubles_m[c] += 1
        ff[b][d] += 1
        ff[d][b] += 1
        if ff[b][d] == 2:
            doubles_f[b] += 1
            doubles_f[d] += 1
        xo[a][d] += 1
        xo[c][b] += 1
        return True

    def unplace(pa: int, pb: int) -> None:
        a, b = pairs[pa]
        c, d = pairs[pb]
        if mm[a][c] == 2:
            doubles_m[a] -= 1
            doubles_m[c] -= 1
        mm[a][c] -= 1
        mm[c][a] -= 1
        if ff[b][d] == 2:
            doubles_f[b] -= 1
            doubles_f[d] -= 1
        ff[b][d] -= 1
        ff[d][b] -= 1
        xo[a][d] -= 1
        xo[c][b] -= 1

    def rec() -> bool:
        nonlocal nodes, witness
        pa = next((i for i in range(count) if not used[i]), None)
        if pa is None:
            witness = list(chosen)
            return True
        used[pa] = True
        for pb in range(pa + 1, count):
            if used[pb]:
                continue
            nodes += 1
            if nodes > budget:
                raise _OutOfBudget()
            if not try_place(pa, pb):
                continue
            used[pb] = True
            chosen.append((pa, pb))
            if rec():
                return True
            chosen.pop()
            used[pb] = False
            unplace(pa, pb)
        used[pa] = False
        return False

    try:
        found = rec()
    except _OutOfBudget:
        return SearchOutcome(SearchStatus.INCONCLUSIVE, None, SearchStats(0, -1, nodes))

    if found and witness is not None:
        spouses = frozenset((i, i) for i in range(1, k + 1))
        games = tuple(
            Game(Partnership(*pairs[a]), Partnership(*pairs[b])) for a, b in witness
        )
        sched = Schedule(TournamentParams(n, spouses), games)
        assert verify(sched).valid
        return SearchOutcome(SearchStatus.FOUND, sched, SearchStats(0, 0, nodes))
    return SearchOutcome(SearchStatus.NOT_EXIST, None, SearchStats(0, -1, nodes))
