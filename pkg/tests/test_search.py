import random

import pytest

from cmdrr.errors import InvalidParams
from cmdrr.search import (
    SearchStatus,
    TabuParams,
    exhaustive_search,
    random_pairing,
    state_cost,
    tabu_find,
)
from cmdrr.verifier import verify


class TestCostFunction:
    def test_cost_zero_iff_valid_on_random_states(self):
        # 1000 random pairings across small sizes: the tabu cost vanishes
        # exactly when the full checker accepts
        rng = random.Random(12345)
        cases = [(2, 0), (3, 1), (4, 0), (4, 2), (5, 1), (6, 0), (6, 2), (6, 4)]
        checked = 0
        for n, k in cases:
            for _ in range(125):
                state = random_pairing(n, k, rng)
                schedule = state.to_schedule()
                report = verify(schedule)
                assert (state.cost == 0) == report.valid
                assert state.cost == state_cost(schedule)
                checked += 1
        assert checked == 1000

    def test_partnership_multiset_invariant_under_moves(self):
        rng = random.Random(7)
        state = random_pairing(5, 1, rng)
        before = sorted(state.pairs)
        moved = 0
        while moved < 50:
            u = rng.randrange(len(state.partner))
            v = rng.randrange(len(state.partner))
            if v in (u, state.partner[u]):
                continue
            if state.move_delta(u, v) is not None:
                state.apply_move(u, v)
                moved += 1
        schedule = state.to_schedule()
        partnerships = sorted(
            (side.male, side.female)
            for g in schedule.games
            for side in (g.side_a, g.side_b)
        )
        assert partnerships == before


class TestTabu:
    def test_finds_3_1(self):
        out = tabu_find(3, 1, TabuParams(seed=0, max_iterations=10_000))
        assert out.status is SearchStatus.FOUND
        report = verify(out.schedule)
        assert report.valid
        assert (out.schedule.n, out.schedule.k) == (3, 1)

    def test_deterministic_per_seed(self):
        a = tabu_find(6, 0, TabuParams(seed=5))
        b = tabu_find(6, 0, TabuParams(seed=5))
        assert a.schedule == b.schedule
        assert a.stats == b.stats

    def test_4_2_never_reaches_cost_zero(self):
        out = tabu_find(4, 2, TabuParams(seed=0, max_iterations=3000, restarts=3))
        assert out.status is SearchStatus.INCONCLUSIVE
        assert out.stats.best_cost > 0

    def test_parity_rejected(self):
        with pytest.raises(InvalidParams):
            tabu_find(5, 2)

    def test_degenerate_1_1(self):
        out = tabu_find(1, 1)
        assert out.status is SearchStatus.FOUND
        assert not out.schedule.games

    def test_progress_hook_called(self):
        seen = []
        tabu_find(4, 2, TabuParams(seed=1, max_iterations=2500, restarts=2),
                  progress=lambda it, best: seen.append((it, best)))
        assert seen and seen[0][0] == 1000


class TestExhaustive:
    def test_found_cases(self):
        for n, k in [(2, 0), (3, 1), (4, 0)]:
            out = exhaustive_search(n, k)
            assert out.status is SearchStatus.FOUND, (n, k)
            assert verify(out.schedule).valid

    def test_not_exist_cases(self):
        for n, k in [(2, 2), (3, 3), (4, 2)]:
            out = exhaustive_search(n, k)
            assert out.status is SearchStatus.NOT_EXIST, (n, k)

    def test_agrees_with_existence_table(self):
        from cmdrr.verifier import ExistenceStatus, existence_status

        for n, k in [(2, 0), (2, 2), (3, 1), (3, 3), (4, 0), (4, 2), (4, 4)]:
            out = exhaustive_search(n, k)
            expected = existence_status(n, k)
            if expected is ExistenceStatus.EXISTS:
                assert out.status is SearchStatus.FOUND
            else:
                assert out.status is SearchStatus.NOT_EXIST

    def test_budget_inconclusive(self):
        out = exhaustive_search(6, 0, budget=5)
        assert out.status is SearchStatus.INCONCLUSIVE

    def test_large_guard(self):
        with pytest.raises(InvalidParams):
            exhaustive_search(8, 0)

    def test_degenerate(self):
        out = exhaustive_search(1, 1)
        assert out.status is SearchStatus.FOUND


@pytest.mark.stretch
class TestConjectureEvidence:
    """Long runs logged as evidence for the open small cases."""

    def test_5_3(self):
        out = exhaustive_search(5, 3, budget=200_000_000)
        print(f"\nexhaustive (5,3): {out.status.value} after {out.stats.nodes} nodes")
        assert out.status in (SearchStatus.NOT_EXIST, SearchStatus.INCONCLUSIVE)

    def test_6_2(self):
        out = exhaustive_search(6, 2, budget=500_000_000)
        print(f"\nexhaustive (6,2): {out.status.value} after {out.stats.nodes} nodes")
        assert out.status in (SearchStatus.NOT_EXIST, SearchStatus.INCONCLUSIVE)
