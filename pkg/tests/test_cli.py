import json

import pytest

from cmdrr import catalog
from cmdrr.cli import main
from cmdrr.formats import parse_document, schedule_to_grid


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCatalogCommands:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "catalog", "list")
        assert code == 0
        assert "C31" in out and "HSOLSSOM-2-6" in out

    def test_list_json(self, capsys):
        code, out, _ = run(capsys, "catalog", "list", "--json")
        assert code == 0
        payload = json.loads(out)
        assert any(e["id"] == "C80" for e in payload)

    def test_show_grid(self, capsys):
        code, out, _ = run(capsys, "catalog", "show", "C31")
        assert code == 0
        assert "CMDRR n=3 k=1" in out

    def test_show_json_round_trips(self, capsys):
        code, out, _ = run(capsys, "catalog", "show", "C64", "--json")
        assert code == 0
        doc = parse_document(out)
        assert doc.schedule.game_set() == catalog.load("C64").payload.game_set()

    def test_show_unknown(self, capsys):
        code, _, err = run(capsys, "catalog", "show", "nope")
        assert code == 1
        assert "nope" in err


class TestVerifyCommand:
    def test_valid_file(self, tmp_path, capsys, c31):
        path = tmp_path / "c31.grid"
        path.write_text(schedule_to_grid(c31))
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 0
        assert "valid" in out

    def test_catalog_id_accepted(self, capsys):
        code, out, _ = run(capsys, "verify", "C31")
        assert code == 0

    def test_invalid_schedule_exits_1(self, tmp_path, capsys, c31):
        from cmdrr.core import Schedule

        broken = Schedule(c31.params, c31.games[:-1])
        path = tmp_path / "broken.grid"
        doc = {
            "format_version": 1,
            "n": 3,
            "k": 1,
            "spouses": [[1, 1]],
            "games": [
                [[g.side_a.male, g.side_a.female], [g.side_b.male, g.side_b.female]]
                for g in broken.games
            ],
        }
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 1
        assert "invalid" in out

    def test_parse_failure_exits_2(self, tmp_path, capsys):
        path = tmp_path / "junk.grid"
        path.write_text("CMDRR n=2 k=0\n2,2 zz\n1,2 1,1\n")
        code, _, err = run(capsys, "verify", str(path))
        assert code == 2
        assert "line 2" in err


class TestExistsCommand:
    @pytest.mark.parametrize(
        "n,k,code,word",
        [
            (9, 3, 0, "Exists"),
            (4, 2, 3, "KnownNotExist"),
            (5, 3, 4, "OpenException"),
            (5, 2, 2, "InvalidParams"),
        ],
    )
    def test_exit_codes(self, capsys, n, k, code, word):
        got, out, _ = run(capsys, "exists", str(n), str(k))
        assert got == code
        assert word in out


class TestConstructCommands:
    def test_sols(self, capsys):
        code, out, _ = run(capsys, "construct", "sols", "--n", "5")
        assert code == 0
        assert out.startswith("SOLS n=5")

    def test_samdrr_verifies(self, capsys, tmp_path):
        out_file = tmp_path / "s5.json"
        code, _, _ = run(capsys, "construct", "samdrr", "--n", "5", "--out", str(out_file))
        assert code == 0
        code, out, _ = run(capsys, "verify", str(out_file))
        assert code == 0
        assert "SAMDRR" in out

    def test_fill_c11(self, capsys):
        code, out, _ = run(
            capsys,
            "construct", "fill",
            "--hsols", "HSOLS-1-6-3-1-2-1",
            "--fillers", "unit", "unit", "unit", "unit", "unit", "unit", "C31", "C20",
        )
        assert code == 0
        doc = parse_document(out)
        assert (doc.schedule.n, doc.schedule.k) == (11, 7)

    def test_product(self, capsys, tmp_path):
        base = tmp_path / "base.json"
        run(capsys, "catalog", "show", "C31", "--json")
        code, out, _ = run(capsys, "catalog", "show", "C31", "--json")
        base.write_text(out)
        samdrr = tmp_path / "samdrr.json"
        code, out, _ = run(capsys, "construct", "samdrr", "--n", "5")
        samdrr.write_text(out)
        code, out, _ = run(
            capsys, "construct", "product",
            "--base", str(base), "--samdrr", str(samdrr), "--mols", "auto",
        )
        assert code == 0
        doc = parse_document(out)
        assert (doc.schedule.n, doc.schedule.k) == (15, 5)
        assert len(doc.schedule.games) == 110

    def test_hsolssom2(self, capsys):
        code, out, _ = run(capsys, "construct", "hsolssom2", "--input", "HSOLSSOM-2-6")
        assert code == 0
        doc = parse_document(out)
        assert doc.resolution is not None
        assert len(doc.resolution.rounds()) == 12

    def test_hsolssom3(self, capsys):
        code, out, _ = run(capsys, "construct", "hsolssom3", "--input", "HSOLSSOM-3-5")
        assert code == 0
        doc = parse_document(out)
        assert len(doc.resolution.rounds()) == 16

    def test_construct_pipes_into_verify(self, capsys, tmp_path, monkeypatch):
        import io
        import sys

        code, out, _ = run(capsys, "construct", "samdrr", "--n", "7")
        monkeypatch.setattr(sys, "stdin", io.StringIO(out))
        code, out2, _ = run(capsys, "verify", "-")
        assert code == 0


class TestResolveCommand:
    def test_full_c31(self, capsys):
        code, out, _ = run(capsys, "resolve", "C31", "--mode", "full")
        assert code == 0
        doc = parse_document(out)
        assert len(doc.resolution.rounds()) == 4

    def test_full_infeasible_exits_3(self, capsys):
        code, out, _ = run(capsys, "resolve", "C40", "--mode", "full")
        assert code == 3
        assert "Infeasible" in out

    def test_short(self, capsys):
        code, out, _ = run(
            capsys, "resolve", "C60", "--mode", "short",
            "--games-per-round", "2", "--seed", "1",
        )
        assert code == 0
        doc = parse_document(out)
        assert len(doc.resolution.rounds()) == 9

    def test_short_needs_target(self, capsys):
        code, _, err = run(capsys, "resolve", "C60", "--mode", "short")
        assert code == 2


class TestSearchCommands:
    def test_exhaustive_not_exist(self, capsys):
        code, out, _ = run(capsys, "search", "exhaustive", "--n", "4", "--k", "2")
        assert code == 0
        assert "NotExist" in out

    def test_exhaustive_found(self, capsys):
        code, out, _ = run(capsys, "search", "exhaustive", "--n", "3", "--k", "1")
        assert code == 0
        doc = parse_document(out)
        assert (doc.schedule.n, doc.schedule.k) == (3, 1)

    def test_tabu_small(self, capsys):
        code, out, _ = run(
            capsys, "search", "tabu", "--n", "3", "--k", "1",
            "--seed", "0", "--max-iter", "20000",
        )
        assert code == 0
        doc = parse_document(out)
        assert doc.meta.get("seed") == 0

    def test_tabu_inconclusive_exits_4(self, capsys):
        code, out, _ = run(
            capsys, "search", "tabu", "--n", "4", "--k", "2",
            "--seed", "0", "--max-iter", "500", "--restarts", "1",
        )
        assert code == 4
        assert "Inconclusive" in out


class TestRoster:
    def test_catalog_rounds(self, capsys):
        code, out, _ = run(capsys, "roster", "X-rounds")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 12
        assert lines[0].startswith("R1 ")
        assert "M01 F01 v M02 F02" in lines[0]


class TestReport:
    def test_writes_csv_and_figures(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "report", "C31-resolution", "--out-dir", str(tmp_path), "--stem", "c31"
        )
        assert code == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert names == {
            "c31_games.csv",
            "c31_matrix.png",
            "c31_oppositions.png",
            "c31_rounds.png",
            "c31_byes.png",
        }
        csv_text = (tmp_path / "c31_games.csv").read_text().splitlines()
        assert csv_text[0] == "game,male_a,female_a,male_b,female_b,round"
        assert len(csv_text) == 5
        for name in names:
            assert (tmp_path / name).stat().st_size > 0

    def test_unresolved_schedule_skips_round_figures(self, capsys, tmp_path):
        code, out, _ = run(capsys, "report", "C64", "--out-dir", str(tmp_path))
        assert code == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert "schedule_rounds.png" not in names
        assert "schedule_matrix.png" in names
