"""Command-line interface.

Exit codes (stable contract):
  0  success; for `verify` a valid schedule, for `exists` Exists, for
     `resolve`/`search` a definite answer (found, or proved not to exist)
  1  verify: invalid schedule; unexpected runtime failure
  2  usage or parse failure (parse errors carry a line/column), and
     `exists` with impossible parameters
  3  exists: KnownNotExist; resolve: Infeasible
  4  exists: OpenException; resolve/search: Inconclusive (budget hit)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, constructors, formats, search
from .core import Schedule, canonicalize
from .errors import CmdrrError, NotFound, ParseError
from .latin import cyclic_mols, cyclic_sols
from .resolver import (
    ResolveStatus,
    Resolution,
    resolve_full,
    resolve_short,
    verify_resolution,
)
from .verifier import ExistenceStatus, existence_status, verify

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_NOT_EXIST = 3
EXIT_OPEN = 4


def _read_text(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    return Path(value).read_text()


def _load_doc(value: str) -> formats.ParsedDoc:
    """A file path, '-' for stdin, or a catalog id."""
    if value != "-" and not Path(value).exists():
        try:
            entry = catalog.load(value)
        except NotFound:
            raise ParseError(f"{value!r} is neither a file nor a catalog id")
        if entry.kind in (catalog.CatalogKind.CMDRR,):
            return formats.ParsedDoc("CMDRR", schedule=entry.payload, meta=dict(entry.meta))
        if entry.kind in (catalog.CatalogKind.GAME_ROUNDS, catalog.CatalogKind.ROUND_MATRIX):
            rs = entry.payload
            return formats.ParsedDoc(
                "CMDRR", schedule=rs.schedule, resolution=rs.resolution, meta=dict(entry.meta)
            )
        if entry.kind is catalog.CatalogKind.HSOLS:
            return formats.ParsedDoc("HSOLS", hsols=entry.payload, meta=dict(entry.meta))
        if entry.kind is catalog.CatalogKind.HSOLSSOM:
            return formats.ParsedDoc("HSOLSSOM", hsolssom=entry.payload, meta=dict(entry.meta))
        raise ParseError(f"catalog entry {value!r} has no loadable payload")
    return formats.parse_document(_read_text(value))


def _load_schedule(value: str) -> tuple[Schedule, Resolution | None]:
    doc = _load_doc(value)
    if doc.schedule is None:
        raise ParseError(f"{value!r} does not contain a schedule")
    return doc.schedule, doc.resolution


def _load_filler(value: str) -> Schedule:
    if value == "unit":
        return constructors.unit_cmdrr()
    schedule, _ = _load_schedule(value)
    return schedule


def _emit_schedule(args, schedule: Schedule, resolution=None, seed=None) -> None:
    if getattr(args, "grid", False):
        text = formats.schedule_to_grid(schedule)
    else:
        text = formats.document_to_json(
            formats.schedule_to_document(schedule, resolution, seed)
        )
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommand handlers ------------------------------------------------------

def _cmd_catalog_list(args) -> int:
    entries = catalog.list_entries()
    if args.json:
        payload = [
            {"id": e.id, "kind": e.kind.value, "caption": e.caption, "provenance": e.provenance}
            for e in entries
        ]
        print(json.dumps(payload, indent=2))
    else:
        for e in entries:
            print(f"{e.id:20s} {e.kind.value:18s} {e.caption}")
    return EXIT_OK


def _cmd_catalog_show(args) -> int:
    entry = catalog.load(args.id)
    if args.json and entry.kind in (catalog.CatalogKind.CMDRR, catalog.CatalogKind.GAME_ROUNDS):
        if entry.kind is catalog.CatalogKind.CMDRR:
            doc = formats.schedule_to_document(entry.payload)
        else:
            doc = formats.schedule_to_document(entry.payload.schedule, entry.payload.resolution)
        sys.stdout.write(formats.document_to_json(doc))
        return EXIT_OK
    print(f"{entry.id}: {entry.caption}")
    if entry.kind is catalog.CatalogKind.CMDRR:
        sys.stdout.write(formats.schedule_to_grid(entry.payload))
    elif entry.kind is catalog.CatalogKind.ROUND_MATRIX:
        rs = entry.payload
        sys.stdout.write(formats.resolution_to_matrix_text(rs.schedule, rs.resolution))
    elif entry.kind is catalog.CatalogKind.GAME_ROUNDS:
        rs = entry.payload
        for line in formats.roster_lines(rs.schedule, rs.resolution):
            print(line)
    else:
        sys.stdout.write((catalog.data_dir() / catalog._BY_ID[entry.id][2]).read_text())
    return EXIT_OK


def _cmd_verify(args) -> int:
    schedule, resolution = _load_schedule(args.file)
    report = verify(schedule)
    print(f"CMDRR({schedule.n},{schedule.k}): {report.summary()}")
    for v in report.violations:
        print(f"  {v}")
    if resolution is not None and report.valid:
        audit = verify_resolution(schedule, resolution)
        print(
            f"resolution: {len(audit.games_per_round)} rounds, "
            f"{audit.full_rounds} full / {audit.short_rounds} short"
        )
    return EXIT_OK if report.valid else EXIT_INVALID


def _cmd_exists(args) -> int:
    status = existence_status(args.n, args.k)
    print(status.value)
    return {
        ExistenceStatus.EXISTS: EXIT_OK,
        ExistenceStatus.KNOWN_NOT_EXIST: EXIT_NOT_EXIST,
        ExistenceStatus.OPEN_EXCEPTION: EXIT_OPEN,
        ExistenceStatus.INVALID_PARAMS: EXIT_USAGE,
    }[status]


def _cmd_construct_sols(args) -> int:
    sq = cyclic_sols(args.n)
    text = formats.latin_to_text(sq)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_construct_samdrr(args) -> int:
    schedule = constructors.samdrr_from_sols(cyclic_sols(args.n))
    _emit_schedule(args, schedule)
    return EXIT_OK


def _cmd_construct_fill(args) -> int:
    doc = _load_doc(args.hsols)
    if doc.hsols is None:
        raise ParseError(f"{args.hsols!r} is not a holey square")
    fillers = [_load_filler(f) for f in args.fillers]
    schedule = constructors.fill_hsols(doc.hsols, fillers)
    _emit_schedule(args, schedule)
    return EXIT_OK


def _cmd_construct_product(args) -> int:
    base, _ = _load_schedule(args.base)
    samdrr, _ = _load_schedule(args.samdrr)
    if args.canonicalize:
        base = canonicalize(base)
        samdrr = canonicalize(samdrr)
    if args.mols == "auto":
        mols = cyclic_mols(base.n)
    else:
        doc = formats.parse_grid(_read_text(args.mols))
        if doc.mols is None:
            raise ParseError(f"{args.mols!r} is not an orthogonal-pair document")
        mols = doc.mols
    schedule = constructors.product(base, samdrr, mols)
    _emit_schedule(args, schedule)
    return EXIT_OK


def _cmd_construct_hsolssom(args, builder) -> int:
    doc = _load_doc(args.input)
    if doc.hsolssom is None:
        raise ParseError(f"{args.input!r} is not a square-with-mate document")
    schedule, resolution = builder(doc.hsolssom)
    _emit_schedule(args, schedule, resolution)
    return EXIT_OK


def _cmd_resolve(args) -> int:
    schedule, _ = _load_schedule(args.file)
    if args.mode == "full":
        result = resolve_full(schedule, budget=args.budget)
    else:
        if args.games_per_round is None:
            raise ParseError("--games-per-round is required with --mode short")
        result = resolve_short(
            schedule, args.games_per_round, budget=args.budget, seed=args.seed
        )
    if result.status is ResolveStatus.RESOLVED:
        _emit_schedule(args, schedule, result.resolution, seed=args.seed)
        return EXIT_OK
    print(result.status.value)
    return EXIT_NOT_EXIST if result.status is ResolveStatus.INFEASIBLE else EXIT_OPEN


def _cmd_search_tabu(args) -> int:
    params = search.TabuParams(
        seed=args.seed,
        max_iterations=args.max_iter,
        tabu_tenure=args.tenure,
        restarts=args.restarts,
    )
    hook = None
    if args.verbose:
        hook = lambda it, best: print(f"iter={it} best_cost={best}", file=sys.stderr)
    outcome = search.tabu_find(args.n, args.k, params, progress=hook)
    if outcome.status is search.SearchStatus.FOUND:
        _emit_schedule(args, outcome.schedule, seed=args.seed)
        return EXIT_OK
    print(f"{outcome.status.value} (best cost {outcome.stats.best_cost})")
    return EXIT_OPEN


def _cmd_search_exhaustive(args) -> int:
    outcome = search.exhaustive_search(
        args.n, args.k, budget=args.budget, allow_large=args.allow_large
    )
    if outcome.status is search.SearchStatus.FOUND:
        _emit_schedule(args, outcome.schedule)
        return EXIT_OK
    print(outcome.status.value)
    return EXIT_OK if outcome.status is search.SearchStatus.NOT_EXIST else EXIT_OPEN


def _cmd_roster(args) -> int:
    schedule, resolution = _load_schedule(args.file)
    for line in formats.roster_lines(schedule, resolution):
        print(line)
    return EXIT_OK


def _cmd_report(args) -> int:
    from .report import write_report

    schedule, resolution = _load_schedule(args.file)
    written = write_report(schedule, resolution, args.out_dir, stem=args.stem)
    for path in written:
        print(path)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmdrr",
        description="Mixed doubles round robin tournaments: verify, construct, resolve, search.",
        epilog=__doc__.split("Exit codes", 1)[-1].join(["Exit codes", ""]),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--out", help="write the result to this file instead of stdout")
        p.add_argument("--grid", action="store_true", help="emit grid text instead of JSON")

    p_cat = sub.add_parser("catalog", help="browse the bundled designs")
    cat_sub = p_cat.add_subparsers(dest="catalog_command", required=True)
    p = cat_sub.add_parser("list", help="list all entries")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_list)
    p = cat_sub.add_parser("show", help="print one entry")
    p.add_argument("id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_show)

    p = sub.add_parser("verify", help="check a schedule file (or catalog id, or - for stdin)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("exists", help="existence status for parameters (n, k)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=_cmd_exists)

    p_con = sub.add_parser("construct", help="build designs")
    con_sub = p_con.add_subparsers(dest="construct_command", required=True)

    p = con_sub.add_parser("sols", help="cyclic self-orthogonal square (gcd(n,6)=1)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct_sols)

    p = con_sub.add_parser("samdrr", help="spouse-avoiding tournament from the cyclic square")
    p.add_argument("--n", type=int, required=True)
    add_output_flags(p)
    p.set_defaults(func=_cmd_construct_samdrr)

    p = con_sub.add_parser("fill", help="fill the holes of a holey square with tournaments")
    p.add_argument("--hsols", required=True, help="holey square file or catalog id")
    p.add_argument(
        "--fillers",
        nargs="+",
        required=True,
        help="one file/catalog id per hole, in hole order; 'unit' = the 1-couple tournament",
    )
    add_output_flags(p)
    p.set_defaults(func=_cmd_construct_fill)

    p = con_sub.add_parser("product", help="product of a tournament and a spouse-avoiding one")
    p.add_argument("--base", required=True)
    p.add_argument("--samdrr", required=True)
    p.add_argument("--mols", default="auto", help="'auto' (cyclic, odd order) or a MOLS file")
    p.add_argument(
        "--canonicalize",
        action="store_true",
        help="relabel both factors into canonical spouse form first",
    )
    add_output_flags(p)
    p.set_defaults(func=_cmd_construct_product)

    p = con_sub.add_parser("hsolssom2", help="fully resolved tournament from a type-2^m square with mate")
    p.add_argument("--input", required=True)
    add_output_flags(p)
    p.set_defaults(func=lambda a: _cmd_construct_hsolssom(a, constructors.resolvable_from_hsolssom2))

    p = con_sub.add_parser("hsolssom3", help="resolved tournament from a type-3^m square with mate")
    p.add_argument("--input", required=True)
    add_output_flags(p)
    p.set_defaults(func=lambda a: _cmd_construct_hsolssom(a, constructors.cmdrr3n_from_hsolssom3))

    p = sub.add_parser("resolve", help="partition a schedule's games into rounds")
    p.add_argument("file")
    p.add_argument("--mode", choices=("full", "short"), default="full")
    p.add_argument("--games-per-round", type=int, default=None)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=0)
    add_output_flags(p)
    p.set_defaults(func=_cmd_resolve)

    p_search = sub.add_parser("search", help="find designs from scratch")
    search_sub = p_search.add_subparsers(dest="search_command", required=True)

    p = search_sub.add_parser("tabu", help="tabu search over partnership exchanges")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=200_000)
    p.add_argument("--tenure", type=int, default=12)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--verbose", action="store_true")
    add_output_flags(p)
    p.set_defaults(func=_cmd_search_tabu)

    p = search_sub.add_parser("exhaustive", help="complete backtracking (certifies NotExist)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--allow-large", action="store_true")
    add_output_flags(p)
    p.set_defaults(func=_cmd_search_exhaustive)

    p = sub.add_parser("roster", help="human-readable fixture list")
    p.add_argument("file")
    p.set_defaults(func=_cmd_roster)

    p = sub.add_parser("report", help="write figures and a games CSV for a schedule")
    p.add_argument("file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--stem", default="schedule")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CmdrrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
