import pytest

from cmdrr import catalog
from cmdrr.constructors import (
    cmdrr3n_from_hsolssom3,
    fill_hsols,
    product,
    resolvable_from_hsolssom2,
    samdrr_from_sols,
    unit_cmdrr,
)
from cmdrr.core import expected_game_count
from cmdrr.errors import FillerMismatch, InvalidInput, WrongType
from cmdrr.latin import (
    HoleStructure,
    Hsolssom,
    LatinSquare,
    SymmetricMate,
    cyclic_mols,
    cyclic_sols,
    hsols_from_sols,
)
from cmdrr.resolver import verify_resolution
from cmdrr.verifier import Classification, verify


def reps(schedule):
    return {f"{a}{b}" for a, b in verify(schedule).repeat_oppositions}


class TestSamdrrFromSols:
    @pytest.mark.parametrize("n,games", [(5, 10), (7, 21)])
    def test_cyclic_orders(self, n, games):
        s = samdrr_from_sols(cyclic_sols(n))
        report = verify(s)
        assert report.valid and report.classification is Classification.SAMDRR
        assert len(s.games) == games == n * (n - 1) // 2

    def test_order_one_degenerate(self):
        s = samdrr_from_sols(LatinSquare(1, ((1,),)))
        assert s.n == 1 and s.k == 1 and not s.games
        assert verify(s).valid

    def test_rejects_non_sols(self):
        cyclic3 = LatinSquare(3, ((1, 2, 3), (2, 3, 1), (3, 1, 2)))
        with pytest.raises(InvalidInput):
            samdrr_from_sols(cyclic3)


class TestFillHsols:
    def test_c11_pipeline(self, c117):
        report = verify(c117)
        assert report.valid
        assert (c117.n, c117.k) == (11, 7)
        assert reps(c117) == {"M8M9", "F8F9", "M10M11", "F10F11"}
        assert c117.params.spouses == frozenset((i, i) for i in range(1, 8))

    def test_hole_free_reduces_to_samdrr(self):
        sq = cyclic_sols(7)
        filled = fill_hsols(hsols_from_sols(sq), [unit_cmdrr()] * 7)
        direct = samdrr_from_sols(sq)
        assert filled.game_set() == direct.game_set()
        assert filled.params.spouses == direct.params.spouses

    def test_c166_pipeline(self, c166):
        report = verify(c166)
        assert report.valid
        assert (c166.n, c166.k) == (16, 6)
        assert len(c166.games) == expected_game_count(16, 6)
        # the filled square reproduces the published 25-round game set
        printed = catalog.load("C166-rounds").payload.schedule
        assert c166.game_set() == printed.game_set()

    def test_filler_count_mismatch(self, c31):
        h = catalog.load("HSOLS-1-6-3-1-2-1").payload
        with pytest.raises(FillerMismatch):
            fill_hsols(h, [c31])

    def test_filler_size_mismatch(self, c31, c20):
        h = catalog.load("HSOLS-1-6-3-1-2-1").payload
        with pytest.raises(FillerMismatch):
            fill_hsols(h, [unit_cmdrr()] * 6 + [c20, c31])

    def test_game_count_law(self, c117):
        # (n^2 - s)/2 with s the summed filler spouse counts
        assert len(c117.games) == expected_game_count(11, 7)


class TestProduct:
    def test_c31_times_samdrr5(self, c31, samdrr5):
        out = product(c31, samdrr5, cyclic_mols(3))
        report = verify(out)
        assert report.valid
        assert (out.n, out.k) == (15, 5)
        assert len(out.games) == 110 == ((15 * 15) - 5) // 2

    def test_c31_times_samdrr7(self, c31, samdrr7):
        out = product(c31, samdrr7, cyclic_mols(3))
        assert verify(out).valid
        assert (out.n, out.k) == (21, 7)
        assert len(out.games) == 217 == ((21 * 21) - 7) // 2

    def test_degenerate_base(self, samdrr5):
        out = product(unit_cmdrr(), samdrr5, cyclic_mols(1))
        assert verify(out).valid
        assert (out.n, out.k) == (5, 5)
        assert len(out.games) == len(samdrr5.games)

    def test_type1_restriction_is_base_copy(self, c31, samdrr5):
        # restricting to copy j recovers the base game pattern
        out = product(c31, samdrr5, cyclic_mols(3))
        n, m = 3, 5
        for j in range(1, m + 1):
            lo, hi = (j - 1) * n + 1, j * n
            copy_games = {
                g for g in out.games
                if all(lo <= p.index <= hi for p in g.players)
            }
            assert len(copy_games) == len(c31.games)

    def test_order_mismatch(self, c31, samdrr5):
        from cmdrr.errors import ShapeError

        with pytest.raises(ShapeError):
            product(c31, samdrr5, cyclic_mols(5))

    def test_non_canonical_base_rejected(self, c31, samdrr5):
        from cmdrr.core import Game, Partnership, Schedule, TournamentParams

        # relabel females 1<->2: still valid, but the couple is now (1, 2)
        swap = {1: 2, 2: 1, 3: 3}
        games = tuple(
            Game(
                Partnership(g.side_a.male, swap[g.side_a.female]),
                Partnership(g.side_b.male, swap[g.side_b.female]),
            )
            for g in c31.games
        )
        base = Schedule(TournamentParams(3, frozenset({(1, 2)})), games)
        assert verify(base).valid
        with pytest.raises(InvalidInput):
            product(base, samdrr5, cyclic_mols(3))


class TestHsolssom2:
    def test_example_x(self, mmdrr12):
        schedule, resolution = mmdrr12
        report = verify(schedule)
        assert report.valid and report.classification is Classification.STRICT_MMDRR
        audit = verify_resolution(schedule, resolution)
        assert audit.full_rounds == 12 and audit.short_rounds == 0
        assert audit.games_per_round == (6,) * 12
        assert audit.fully_resolvable

    def test_matches_printed_rounds(self, mmdrr12):
        schedule, resolution = mmdrr12
        printed = catalog.load("X-rounds").payload
        mine = [
            frozenset(schedule.games[g] for g in rnd) for rnd in resolution.rounds()
        ]
        theirs = [
            frozenset(printed.schedule.games[g] for g in rnd)
            for rnd in printed.resolution.rounds()
        ]
        assert mine == theirs

    def test_wrong_hole_type(self):
        hs = catalog.load("HSOLSSOM-3-5").payload
        with pytest.raises(WrongType):
            resolvable_from_hsolssom2(hs)

    def test_malformed_mate_refused(self):
        hs = catalog.load("HSOLSSOM-2-6").payload
        entries = [list(r) for r in hs.mate.entries]
        entries[0][2], entries[0][3] = entries[0][3], entries[0][2]
        entries[2][0], entries[3][0] = entries[3][0], entries[2][0]
        bad_mate = SymmetricMate(hs.n, hs.holes, tuple(tuple(r) for r in entries))
        with pytest.raises(InvalidInput):
            resolvable_from_hsolssom2(Hsolssom(hs.square, bad_mate))


class TestHsolssom3:
    def test_example_y(self, cmdrr15):
        schedule, resolution = cmdrr15
        report = verify(schedule)
        assert report.valid
        assert (schedule.n, schedule.k) == (15, 5)
        audit = verify_resolution(schedule, resolution)
        assert audit.games_per_round[:15] == (7,) * 15
        assert audit.games_per_round[15] == 5
        assert audit.full_rounds == 15 and audit.short_rounds == 1
        assert audit.fully_resolvable

    def test_bye_audit(self, cmdrr15):
        schedule, resolution = cmdrr15
        audit = verify_resolution(schedule, resolution)
        spouse_players = {(s, i) for i in (1, 4, 7, 10, 13) for s in "MF"}
        for player, count in audit.bye_counts:
            want = 2 if (player.sex, player.index) in spouse_players else 1
            assert count == want, (player, count)

    def test_matches_printed_rounds(self, cmdrr15):
        schedule, resolution = cmdrr15
        printed = catalog.load("Y-rounds").payload
        mine = [
            frozenset(schedule.games[g] for g in rnd) for rnd in resolution.rounds()
        ]
        theirs = [
            frozenset(printed.schedule.games[g] for g in rnd)
            for rnd in printed.resolution.rounds()
        ]
        assert mine == theirs

    def test_even_hole_count_rejected(self):
        hs = catalog.load("HSOLSSOM-2-6").payload
        with pytest.raises(WrongType):
            cmdrr3n_from_hsolssom3(hs)


class TestGameCountLaw:
    def test_all_catalog_and_constructions(self, c117, c166, mmdrr12, cmdrr15, samdrr5, samdrr7):
        targets = [c117, c166, mmdrr12[0], cmdrr15[0], samdrr5, samdrr7]
        for entry in catalog.list_entries():
            if entry.kind is catalog.CatalogKind.CMDRR:
                targets.append(entry.payload)
            elif entry.kind is catalog.CatalogKind.GAME_ROUNDS:
                targets.append(entry.payload.schedule)
        for s in targets:
            assert len(s.games) == expected_game_count(s.n, s.k)
