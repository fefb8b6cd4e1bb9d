"""Text and JSON serialization.

Grid family (one header line, then whitespace-separated rows):

* ``CMDRR n=3 k=1 spouses=1:1`` followed by n rows of n cells; a cell is
  ``x,y`` (the opposing partnership), ``.`` for a spouse cell, or a
  two-character digit pair when the header says ``digits=compact``
  (``digits=compact0`` additionally reads the digit 0 as player 10 —
  the compact forms exist for tables transcribed from print).
* ``ROUNDMATRIX for=C31 n=3`` with round numbers or ``.`` per cell.
* ``HSOLS n=11 holes=1|2|3|4|5|6|7,8,9|10,11`` with symbols or ``.``.
* ``HSOLSSOM n=12 holes=...`` with two blocks (square, blank line, mate).
* ``GAMEROUNDS n=12 k=0`` with roster lines ``R1 M01 F01 v M02 F02 ...``.

The JSON document is the machine interface; ``games`` hold 1-based
player indices, the optional ``resolution`` lists 0-based positions into
``games`` per round.  Writers are deterministic, so one parse/emit pass
normalizes any document byte-stably.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .core import Game, Partnership, Schedule, TournamentParams
from .errors import ParseError
from .latin import (
    HoleStructure,
    Hsolssom,
    HolyLatinSquare,
    LatinSquare,
    MolsPair,
    SymmetricMate,
)
from .resolver import Resolution, resolution_matrix

FORMAT_VERSION = 1

_GAME_RE = re.compile(r"M(\d+)\s*F(\d+)\s*v\s*M(\d+)\s*F(\d+)")


@dataclass
class ParsedDoc:
    kind: str
    schedule: Schedule | None = None
    resolution: Resolution | None = None
    hsols: HolyLatinSquare | None = None
    hsolssom: Hsolssom | None = None
    latin: LatinSquare | None = None
    mols: MolsPair | None = None
    round_games: list[list[Game]] | None = None
    round_grid: list[list[int | None]] | None = None
    meta: dict = field(default_factory=dict)


def _header_fields(line: str, lineno: int) -> tuple[str, dict[str, str]]:
    tokens = line.split()
    kind = tokens[0]
    fields: dict[str, str] = {}
    col = len(kind) + 1
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
        key, value = tok.split("=", 1)
        fields[key] = value
        col += len(tok) + 1
    return kind, fields


def _int_field(fields: dict, key: str, lineno: int) -> int:
    if key not in fields:
        raise ParseError(f"missing {key}= in header", lineno, 1)
    try:
        return int(fields[key])
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {fields[key]!r}", lineno, 1)


def _parse_spouses(fields: dict, lineno: int) -> frozenset[tuple[int, int]]:
    raw = fields.get("spouses", "")
    if not raw:
        return frozenset()
    out = set()
    for part in raw.split(","):
        if ":" not in part:
            raise ParseError(f"spouse entry {part!r} must look like m:f", lineno, 1)
        m, f = part.split(":", 1)
        out.add((int(m), int(f)))
    return frozenset(out)


def _parse_repeats(fields: dict) -> tuple[str, ...]:
    raw = fields.get("repeats", "")
    return tuple(p for p in raw.split(",") if p)


def _parse_holes(fields: dict, n: int, lineno: int) -> HoleStructure:
    raw = fields.get("holes")
    if raw is None:
        raise ParseError("missing holes= in header", lineno, 1)
    holes = []
    for group in raw.split("|"):
        holes.append(frozenset(int(x) for x in group.split(",")))
    return HoleStructure(n, tuple(holes))


def _cell_to_pair(cell: str, digits: str, lineno: int, col: int) -> Partnership | None:
    if cell == ".":
        return None
    if digits == "pair":
        if "," not in cell:
            raise ParseError(f"cell {cell!r} must be x,y or .", lineno, col)
        x, y = cell.split(",", 1)
        return Partnership(int(x), int(y))
    if len(cell) != 2 or not cell.isdigit():
        raise ParseError(f"compact cell {cell!r} must be two digits", lineno, col)
    vals = []
    for ch in cell:
        v = int(ch)
        if v == 0:
            if digits != "compact0":
                raise ParseError("digit 0 only allowed with digits=compact0", lineno, col)
            v = 10
        vals.append(v)
    return Partnership(vals[0], vals[1])


def _grid_rows(lines: list[tuple[int, str]], n: int) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, line in lines:
        cells = line.split()
        if len(cells) != n:
            raise ParseError(f"expected {n} cells, got {len(cells)}", lineno, 1)
        rows.append((lineno, cells))
    if len(rows) != n:
        last = lines[-1][0] if lines else 1
        raise ParseError(f"expected {n} rows, got {len(rows)}", last, 1)
    return rows


def _schedule_from_cells(
    n: int, spouses: frozenset[tuple[int, int]], rows: list[tuple[int, list[str]]], digits: str
) -> Schedule:
    from .core import schedule_from_matrix
    from .core import ScheduleMatrix

    cells: list[list[Partnership | None]] = []
    for lineno, row in rows:
        parsed = []
        for col, cell in enumerate(row, start=1):
            parsed.append(_cell_to_pair(cell, digits, lineno, col))
        cells.append(parsed)
    matrix = ScheduleMatrix(n, tuple(tuple(r) for r in cells))
    return schedule_from_matrix(matrix, spouses)


def parse_grid(text: str) -> ParsedDoc:
    """Parse any grid-family document."""
    raw_lines = text.splitlines()
    lines: list[tuple[int, str]] = []
    notes: list[str] = []
    for i, line in enumerate(raw_lines, start=1):
        stripped = line.strip()
        if not stripped:
            lines.append((i, ""))
        elif stripped.startswith("#"):
            notes.append(stripped.lstrip("# "))
        else:
            lines.append((i, stripped))
    while lines and not lines[0][1]:
        lines.pop(0)
    while lines and not lines[-1][1]:
        lines.pop()
    if not lines:
        raise ParseError("empty document", 1, 1)

    header_no, header = lines[0]
    kind, fields = _header_fields(header, header_no)
    body = lines[1:]
    meta = {"notes": notes, **fields}

    if kind == "CMDRR":
        n = _int_field(fields, "n", header_no)
        spouses = _parse_spouses(fields, header_no)
        k = int(fields.get("k", len(spouses)))
        if k != len(spouses):
            raise ParseError(f"k={k} but {len(spouses)} spouse pairs listed", header_no, 1)
        digits = fields.get("digits", "pair")
        if digits not in ("pair", "compact", "compact0"):
            raise ParseError(f"unknown digits mode {digits!r}", header_no, 1)
        rows = _grid_rows([ln for ln in body if ln[1]], n)
        schedule = _schedule_from_cells(n, spouses, rows, digits)
        return ParsedDoc("CMDRR", schedule=schedule, meta={**meta, "repeats": _parse_repeats(fields)})

    if kind == "ROUNDMATRIX":
        n = _int_field(fields, "n", header_no)
        rows = _grid_rows([ln for ln in body if ln[1]], n)
        grid: list[list[int | None]] = []
        for lineno, row in rows:
            parsed_row: list[int | None] = []
            for col, cell in enumerate(row, start=1):
                if cell == ".":
                    parsed_row.append(None)
                else:
                    try:
                        parsed_row.append(int(cell))
                    except ValueError:
                        raise ParseError(f"round cell {cell!r} must be an integer or .", lineno, col)
            grid.append(parsed_row)
        return ParsedDoc("ROUNDMATRIX", round_grid=grid, meta=meta)

    if kind in ("HSOLS", "HSOLSSOM"):
        n = _int_field(fields, "n", header_no)
        holes = _parse_holes(fields, n, header_no)
        blocks: list[list[tuple[int, str]]] = [[]]
        for lineno, line in body:
            if not line:
                if blocks[-1]:
                    blocks.append([])
            else:
                blocks[-1].append((lineno, line))
        if blocks and not blocks[-1]:
            blocks.pop()

        def symbol_rows(block: list[tuple[int, str]]) -> tuple[tuple[int | None, ...], ...]:
            rows = _grid_rows(block, n)
            out = []
            for lineno, row in rows:
                vals: list[int | None] = []
                for col, cell in enumerate(row, start=1):
                    if cell == ".":
                        vals.append(None)
                    else:
                        try:
                            vals.append(int(cell))
                        except ValueError:
                            raise ParseError(f"symbol {cell!r} must be an integer or .", lineno, col)
                out.append(tuple(vals))
            return tuple(out)

        if kind == "HSOLS":
            if len(blocks) != 1:
                raise ParseError("holey square document must have one grid", header_no, 1)
            return ParsedDoc("HSOLS", hsols=HolyLatinSquare(n, holes, symbol_rows(blocks[0])), meta=meta)
        if len(blocks) != 2:
            raise ParseError("square-with-mate document needs two grids split by a blank line", header_no, 1)
        square = HolyLatinSquare(n, holes, symbol_rows(blocks[0]))
        mate = SymmetricMate(n, holes, symbol_rows(blocks[1]))
        return ParsedDoc("HSOLSSOM", hsolssom=Hsolssom(square, mate), meta=meta)

    if kind in ("SOLS", "MOLS"):
        n = _int_field(fields, "n", header_no)
        blocks: list[list[tuple[int, str]]] = [[]]
        for lineno, line in body:
            if not line:
                if blocks[-1]:
                    blocks.append([])
            else:
                blocks[-1].append((lineno, line))
        if blocks and not blocks[-1]:
            blocks.pop()

        def full_rows(block: list[tuple[int, str]]) -> tuple[tuple[int, ...], ...]:
            rows = _grid_rows(block, n)
            out = []
            for lineno, row in rows:
                vals = []
                for col, cell in enumerate(row, start=1):
                    try:
                        vals.append(int(cell))
                    except ValueError:
                        raise ParseError(f"symbol {cell!r} must be an integer", lineno, col)
                out.append(tuple(vals))
            return tuple(out)

        if kind == "SOLS":
            if len(blocks) != 1:
                raise ParseError("square document must have one grid", header_no, 1)
            return ParsedDoc("SOLS", latin=LatinSquare(n, full_rows(blocks[0])), meta=meta)
        if len(blocks) != 2:
            raise ParseError("orthogonal-pair document needs two grids split by a blank line", header_no, 1)
        pair = MolsPair(LatinSquare(n, full_rows(blocks[0])), LatinSquare(n, full_rows(blocks[1])))
        return ParsedDoc("MOLS", mols=pair, meta=meta)

    if kind == "GAMEROUNDS":
        n = _int_field(fields, "n", header_no)
        spouses = _parse_spouses(fields, header_no)
        rounds: list[list[Game]] = []
        for lineno, line in body:
            if not line:
                continue
            if not line.startswith("R"):
                raise ParseError("round lines must start with R<number>", lineno, 1)
            games = [
                Game(Partnership(int(m1), int(f1)), Partnership(int(m2), int(f2)))
                for m1, f1, m2, f2 in _GAME_RE.findall(line)
            ]
            if not games:
                raise ParseError("round line lists no games", lineno, 1)
            rounds.append(games)
        all_games = tuple(g for rnd in rounds for g in rnd)
        schedule = Schedule(TournamentParams(n, spouses), all_games)
        round_of = []
        for ridx, rnd in enumerate(rounds, start=1):
            round_of.extend([ridx] * len(rnd))
        resolution = Resolution(len(rounds), tuple(round_of))
        return ParsedDoc(
            "GAMEROUNDS",
            schedule=schedule,
            resolution=resolution,
            round_games=rounds,
            meta={**meta, "repeats": _parse_repeats(fields)},
        )

    raise ParseError(f"unknown document kind {kind!r}", header_no, 1)


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------

def schedule_to_grid(s: Schedule) -> str:
    """Render a schedule as a CMDRR grid with x,y cells."""
    from .core import matrix_from_schedule

    matrix = matrix_from_schedule(s)
    spouses = ",".join(f"{m}:{f}" for m, f in sorted(s.params.spouses))
    header = f"CMDRR n={s.n} k={s.k}"
    if spouses:
        header += f" spouses={spouses}"
    width = max(
        (len(f"{c.male},{c.female}") for row in matrix.cells for c in row if c),
        default=1,
    )
    lines = [header]
    for row in matrix.cells:
        cells = [("." if c is None else f"{c.male},{c.female}").ljust(width) for c in row]
        lines.append(" ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def latin_to_text(sq: LatinSquare) -> str:
    width = len(str(sq.n))
    lines = [f"SOLS n={sq.n}"]
    for row in sq.entries:
        lines.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def mols_to_text(pair: MolsPair) -> str:
    width = len(str(pair.n))
    lines = [f"MOLS n={pair.n}"]
    for row in pair.first.entries:
        lines.append(" ".join(str(v).rjust(width) for v in row))
    lines.append("")
    for row in pair.second.entries:
        lines.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def resolution_to_matrix_text(s: Schedule, r: Resolution) -> str:
    grid = resolution_matrix(s, r)
    width = len(str(r.num_rounds))
    lines = [f"ROUNDMATRIX n={s.n} rounds={r.num_rounds}"]
    for row in grid:
        lines.append(" ".join(("." if c is None else str(c)).rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def _fmt_player(prefix: str, idx: int, width: int) -> str:
    return f"{prefix}{idx:0{width}d}"


def roster_lines(s: Schedule, r: Resolution | None = None) -> list[str]:
    """Fixture list, one line per round: ``R1 M01 F01 v M02 F02  ...``."""
    width = max(2, len(str(s.n)))

    def fmt_game(g: Game) -> str:
        return (
            f"{_fmt_player('M', g.side_a.male, width)} {_fmt_player('F', g.side_a.female, width)}"
            f" v {_fmt_player('M', g.side_b.male, width)} {_fmt_player('F', g.side_b.female, width)}"
        )

    if r is None:
        return [f"G{i + 1} {fmt_game(g)}" for i, g in enumerate(s.games)]
    lines = []
    for ridx, games in enumerate(r.rounds(), start=1):
        parts = "  ".join(fmt_game(s.games[g]) for g in sorted(games, key=lambda g: s.games[g]))
        lines.append(f"R{ridx} {parts}")
    return lines


def gamerounds_text(s: Schedule, r: Resolution, provenance: str | None = None) -> str:
    spouses = ",".join(f"{m}:{f}" for m, f in sorted(s.params.spouses))
    header = f"GAMEROUNDS n={s.n} k={s.k}"
    if spouses:
        header += f" spouses={spouses}"
    if provenance:
        header += f" provenance={provenance}"
    return "\n".join([header] + roster_lines(s, r)) + "\n"


# ---------------------------------------------------------------------------
# JSON document
# ---------------------------------------------------------------------------

def schedule_to_document(
    s: Schedule, resolution: Resolution | None = None, seed: int | None = None
) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "n": s.n,
        "k": s.k,
        "spouses": [[m, f] for m, f in sorted(s.params.spouses)],
        "games": [
            [[g.side_a.male, g.side_a.female], [g.side_b.male, g.side_b.female]]
            for g in s.games
        ],
    }
    if resolution is not None:
        doc["resolution"] = resolution.rounds()
    if seed is not None:
        doc["seed"] = seed
    return doc


def document_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_document(text: str) -> ParsedDoc:
    """Parse JSON or grid content, sniffing by the first character."""
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("empty document", 1, 1)
    if not stripped.startswith("{"):
        return parse_grid(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno)
    try:
        n = int(doc["n"])
        spouses = frozenset((int(m), int(f)) for m, f in doc.get("spouses", []))
        games = tuple(
            Game(Partnership(int(a[0]), int(a[1])), Partnership(int(b[0]), int(b[1])))
            for a, b in doc["games"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed schedule document: {exc}", 1, 1)
    schedule = Schedule(TournamentParams(n, spouses), games)
    if "k" in doc and int(doc["k"]) != schedule.k:
        raise ParseError(f"k={doc['k']} but {schedule.k} spouse pairs listed", 1, 1)
    resolution = None
    if "resolution" in doc:
        rounds = doc["resolution"]
        round_of = [0] * len(games)
        seen = set()
        for ridx, members in enumerate(rounds, start=1):
            for g in members:
                g = int(g)
                if g < 0 or g >= len(games) or g in seen:
                    raise ParseError(f"resolution references game {g} badly", 1, 1)
                seen.add(g)
                round_of[g] = ridx
        if len(seen) != len(games):
            raise ParseError("resolution does not cover every game", 1, 1)
        resolution = Resolution(len(rounds), tuple(round_of))
    meta = {k: doc[k] for k in ("seed",) if k in doc}
    return ParsedDoc("CMDRR", schedule=schedule, resolution=resolution, meta=meta)
