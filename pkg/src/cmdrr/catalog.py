"""Embedded, verified golden data.

Every bundled design is a published example from the mixed doubles
round robin literature, stored under ``data/`` in the grid formats and
re-verified each time it is loaded: a tournament entry must pass the
validity checker with exactly the couples and repeat oppositions its
header declares, a holey square must pass its own verifier, and a
stored resolution must audit cleanly against its schedule.  A failure
here means the shipped data is corrupt, so it raises instead of
returning.

Set ``CMDRR_DATA_DIR`` to point the loader at a different directory.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import CatalogDefect, NotFound
from .formats import ParsedDoc, parse_grid
from .latin import Hsolssom, HolyLatinSquare, verify_hsols, verify_hsolssom
from .resolver import Resolution, RoundAudit, verify_resolution
from .verifier import verify


class CatalogKind(Enum):
    CMDRR = "Cmdrr"
    HSOLS = "Hsols"
    HSOLSSOM = "Hsolssom"
    ROUND_MATRIX = "ResolutionMatrix"
    GAME_ROUNDS = "GameRounds"


@dataclass(frozen=True)
class ResolvedSchedule:
    """A schedule together with a verified round assignment."""

    schedule: Any
    resolution: Resolution
    audit: RoundAudit


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: CatalogKind
    payload: Any
    caption: str
    provenance: str
    meta: dict


_REGISTRY: list[tuple[str, CatalogKind, str, str]] = [
    # id, kind, filename, provenance label
    ("C20", CatalogKind.CMDRR, "C20.grid", "C20"),
    ("C31", CatalogKind.CMDRR, "C31.grid", "C31"),
    ("C40", CatalogKind.CMDRR, "C40.grid", "C40"),
    ("C51", CatalogKind.CMDRR, "C51.grid", "C51"),
    ("C60", CatalogKind.CMDRR, "C60.grid", "C60"),
    ("C64", CatalogKind.CMDRR, "C64.grid", "C64"),
    ("C71", CatalogKind.CMDRR, "C71.grid", "C71"),
    ("C73", CatalogKind.CMDRR, "C73.grid", "C73"),
    ("C75", CatalogKind.CMDRR, "C75.grid", "C75"),
    ("C80", CatalogKind.CMDRR, "C80.grid", "C80"),
    ("C82", CatalogKind.CMDRR, "C82.grid", "C82"),
    ("C84", CatalogKind.CMDRR, "C84.grid", "C84"),
    ("C86", CatalogKind.CMDRR, "C86.grid", "C86"),
    ("C93", CatalogKind.CMDRR, "C93.grid", "C93"),
    ("C102", CatalogKind.CMDRR, "C102.grid", "C102"),
    ("C31-resolution", CatalogKind.ROUND_MATRIX, "C31-resolution.grid", "C31"),
    ("C60-resolution", CatalogKind.ROUND_MATRIX, "C60-resolution.grid", "C60"),
    ("C71-resolution", CatalogKind.ROUND_MATRIX, "C71-resolution.grid", "C71"),
    ("C80-resolution", CatalogKind.ROUND_MATRIX, "C80-resolution.grid", "C80"),
    ("C93-resolution", CatalogKind.ROUND_MATRIX, "C93-resolution.grid", "C93"),
    ("C102-resolution", CatalogKind.ROUND_MATRIX, "C102-resolution.grid", "C102"),
    ("HSOLS-1-6-3-1-2-1", CatalogKind.HSOLS, "hsols-1-6-3-1-2-1.grid", "C11"),
    ("HSOLS-3-5-1-1", CatalogKind.HSOLS, "hsols-3-5-1-1.grid", "C166"),
    ("HSOLSSOM-2-6", CatalogKind.HSOLSSOM, "hsolssom-2-6.grid", "x"),
    ("HSOLSSOM-3-5", CatalogKind.HSOLSSOM, "hsolssom-3-5.grid", "y"),
    ("X-rounds", CatalogKind.GAME_ROUNDS, "x-rounds.grid", "x"),
    ("Y-rounds", CatalogKind.GAME_ROUNDS, "y-rounds.grid", "y"),
    ("C166-rounds", CatalogKind.GAME_ROUNDS, "C166-rounds.grid", "C166"),
]

_BY_ID = {entry[0]: entry for entry in _REGISTRY}
_CACHE: dict[tuple[str, str], CatalogEntry] = {}


def data_dir() -> Path:
    override = os.environ.get("CMDRR_DATA_DIR")
    if override:
        return Path(override)
    return Path(str(resources.files("cmdrr") / "data"))


def _read(filename: str) -> str:
    path = data_dir() / filename
    if not path.exists():
        raise CatalogDefect(f"catalog file missing: {path}")
    return path.read_text()


def _repeat_strings(report) -> set[str]:
    return {f"{a}{b}" for a, b in report.repeat_oppositions}


def _check_cmdrr(entry_id: str, doc: ParsedDoc) -> None:
    report = verify(doc.schedule)
    if not report.valid:
        raise CatalogDefect(
            f"{entry_id}: stored design is invalid: {[str(v) for v in report.violations[:5]]}"
        )
    declared = set(doc.meta.get("repeats", ()))
    if declared != _repeat_strings(report):
        raise CatalogDefect(
            f"{entry_id}: repeat oppositions {sorted(_repeat_strings(report))} "
            f"do not match the declared {sorted(declared)}"
        )


def _resolution_from_grid(entry_id: str, schedule, grid) -> Resolution:
    n = schedule.n
    if len(grid) != n:
        raise CatalogDefect(f"{entry_id}: round matrix must be {n}x{n}")
    round_of = []
    for g in schedule.games:
        r1 = grid[g.side_a.male - 1][g.side_a.female - 1]
        r2 = grid[g.side_b.male - 1][g.side_b.female - 1]
        if r1 is None or r1 != r2:
            raise CatalogDefect(f"{entry_id}: the two cells of game {g} disagree on the round")
        round_of.append(r1)
    return Resolution(max(round_of), tuple(round_of))


def _natural_key(entry_id: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", entry_id)]


def _build_entry(entry_id: str) -> CatalogEntry:
    entry_id_, kind, filename, provenance = _BY_ID[entry_id]
    doc = parse_grid(_read(filename))

    if kind is CatalogKind.CMDRR:
        _check_cmdrr(entry_id, doc)
        s = doc.schedule
        caption = f"CMDRR({s.n},{s.k})"
        reps = ", ".join(doc.meta.get("repeats", ()))
        if reps:
            caption += f" with repeat oppositions {reps}"
        return CatalogEntry(entry_id, kind, s, caption, provenance, doc.meta)

    if kind is CatalogKind.ROUND_MATRIX:
        ref = doc.meta.get("for")
        if ref is None:
            raise CatalogDefect(f"{entry_id}: round matrix lacks for= reference")
        schedule = load(ref).payload
        resolution = _resolution_from_grid(entry_id, schedule, doc.round_grid)
        audit = verify_resolution(schedule, resolution)
        payload = ResolvedSchedule(schedule, resolution, audit)
        caption = f"resolution of {ref} into {resolution.num_rounds} rounds"
        return CatalogEntry(entry_id, kind, payload, caption, provenance, doc.meta)

    if kind is CatalogKind.HSOLS:
        h: HolyLatinSquare = doc.hsols
        if not verify_hsols(h):
            raise CatalogDefect(f"{entry_id}: stored holey square is invalid")
        caption = f"holey self-orthogonal square of order {h.n}, type {h.holes.type_string()}"
        return CatalogEntry(entry_id, kind, h, caption, provenance, doc.meta)

    if kind is CatalogKind.HSOLSSOM:
        hs: Hsolssom = doc.hsolssom
        if not verify_hsolssom(hs):
            raise CatalogDefect(f"{entry_id}: stored square-with-mate is invalid")
        caption = (
            f"holey self-orthogonal square with symmetric mate, order {hs.n}, "
            f"type {hs.holes.type_string()}"
        )
        return CatalogEntry(entry_id, kind, hs, caption, provenance, doc.meta)

    if kind is CatalogKind.GAME_ROUNDS:
        _check_cmdrr(entry_id, doc)
        audit = verify_resolution(doc.schedule, doc.resolution)
        payload = ResolvedSchedule(doc.schedule, doc.resolution, audit)
        s = doc.schedule
        caption = f"CMDRR({s.n},{s.k}) resolved into {doc.resolution.num_rounds} rounds"
        return CatalogEntry(entry_id, kind, payload, caption, provenance, doc.meta)

    raise CatalogDefect(f"{entry_id}: unhandled kind {kind}")


def load(entry_id: str) -> CatalogEntry:
    """Load and verify one entry; raises NotFound for unknown ids."""
    if entry_id not in _BY_ID:
        raise NotFound(f"no catalog entry {entry_id!r}")
    key = (str(data_dir()), entry_id)
    if key not in _CACHE:
        _CACHE[key] = _build_entry(entry_id)
    return _CACHE[key]


def list_entries() -> list[CatalogEntry]:
    """All entries, verified, in stable id order."""
    return [load(eid) for eid in sorted(_BY_ID, key=_natural_key)]


def ids() -> list[str]:
    return sorted(_BY_ID, key=_natural_key)
