"""Command-line front end.

Usage:
  python manage.py construct --family l2 --m 8 --s 3 --t 1
  python manage.py construct --pair pair.json --output group.json
  python manage.py validate --pair pair.json
  python manage.py aut --family m3 --p 3 --m 9 --r 1 --lambda 1
  python manage.py verify --family l2 --m 8 --all-claims
  python manage.py search --family l2 --m-max 16 [--store]
  python manage.py runs [--run-id N] [--mismatches]

Exit codes: 0 all checks pass, 1 a claim fails, 2 usage, input or scale error.
"""

import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from typing import Optional

from pydantic import ValidationError
from sentry_sdk import init as sentry_init

from . import crud, database
from .aut_engine import aut_order_spectrum, aut_to_matrix, brute_force_aut
from .claims import CLAIMS, applicable_claims, matched_pair_claim, verify_point
from .config import SENTRY_DSN, SENTRY_TRACES_SAMPLE_RATE, get_max_group_order, get_workers
from .errors import ZappaError
from .family_l2 import L2Params, build_l2, enumerate_l2_params
from .family_m3 import M3Params, build_m3, enumerate_m3_params
from .logging_config import configure_logging
from .matched_pair import (
    SemidirectKind,
    build_zappa,
    homomorphic_action_flags,
    is_semidirect,
    pair_from_document,
    validate_matched_pair,
    zappa_from_document,
)
from .schemas import AutReport, PairDocument, PointReport, VerifyReport, ZappaDocument
from .sweep import render_rows, sweep_l2, sweep_m3

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ZappaError, ValueError):
    """Command-line arguments do not describe an input."""


def _init_sentry() -> None:
    if not SENTRY_DSN:
        return
    try:
        sentry_init(dsn=SENTRY_DSN, traces_sample_rate=SENTRY_TRACES_SAMPLE_RATE)
        logger.info("Sentry initialized")
    except Exception:
        logger.exception("Failed to initialize Sentry")


def _emit(text: str, output: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        logger.info("wrote %s", output)
    else:
        sys.stdout.write(text)


def _load_document(path: str):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "mul" in data:
        return ZappaDocument.model_validate(data)
    return PairDocument.model_validate(data)


def _single_params(args: Namespace):
    """Fully specified family parameters, or None."""
    if args.family == "l2" and args.s is not None and args.t is not None:
        return L2Params(args.m, args.s, args.t)
    if args.family == "m3" and args.r is not None and args.lam is not None:
        return M3Params(args.p, args.m, args.r, args.lam)
    return None


def _require_family_args(args: Namespace) -> None:
    if args.m is None:
        raise UsageError(f"--family {args.family} needs --m")
    if args.family == "m3" and args.p is None:
        raise UsageError("--family m3 needs --p")


def _build(params):
    return build_l2(params) if isinstance(params, L2Params) else build_m3(params)


def _genuine_points(args: Namespace) -> list:
    """Every genuine parameter point of the requested modulus."""
    if args.family == "l2":
        return [p for p in enumerate_l2_params(args.m) if not p.semidirect]
    return [q for q in enumerate_m3_params(args.p, args.m) if is_semidirect(build_m3(q)) is SemidirectKind.GENUINE]


def _resolve_one(args: Namespace):
    """(ZSGroup, params or None) for commands that take a single group."""
    if args.pair:
        return zappa_from_document(_load_document(args.pair)), None
    if not args.family:
        raise UsageError("give --pair or --family with its parameters")
    _require_family_args(args)
    params = _single_params(args)
    if params is None:
        raise UsageError(f"--family {args.family} needs every parameter for this command")
    return build_zappa(_build(params)), params


def cmd_construct(args: Namespace) -> int:
    zs, params = _resolve_one(args)
    doc = zs.to_document(params=params.as_dict() if params else None)
    _emit(doc.to_json(), args.output)
    return EXIT_OK


def cmd_validate(args: Namespace) -> int:
    if args.pair:
        mp = pair_from_document(_load_document(args.pair))
    else:
        if not args.family:
            raise UsageError("give --pair or --family with its parameters")
        _require_family_args(args)
        params = _single_params(args)
        if params is None:
            raise UsageError(f"--family {args.family} needs every parameter for this command")
        mp = _build(params)
    report = validate_matched_pair(mp, all_witnesses=args.all_witnesses)
    out = report.model_dump(by_alias=True)
    out["kind"] = is_semidirect(mp).value
    out["flags"] = homomorphic_action_flags(mp)
    out["passed"] = report.passed
    _emit(json.dumps(out, indent=2), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_aut(args: Namespace) -> int:
    zs, _ = _resolve_one(args)
    auts = brute_force_aut(zs, cap=args.cap, workers=args.workers)
    report = AutReport(
        group_order=zs.n,
        aut_order=len(auts),
        spectrum=aut_order_spectrum(auts),
        matrices=[aut_to_matrix(theta, zs).to_dict() for theta in auts] if args.matrices else None,
    )
    _emit(report.to_json(), args.output)
    return EXIT_OK


def cmd_verify(args: Namespace) -> int:
    if args.pair:
        doc = _load_document(args.pair)
        pair_claim = matched_pair_claim(pair_from_document(doc))
        if not pair_claim.verdict:
            logger.warning("%s is not a matched pair: %s", args.pair, pair_claim.witness)
            report = PointReport(params={}, claims=[pair_claim])
            _emit(VerifyReport(points=[report], verdict=False).to_json(), args.output)
            return EXIT_FAIL
        targets = [(zappa_from_document(doc), None)]
    elif args.family:
        _require_family_args(args)
        params = _single_params(args)
        points = [params] if params is not None else _genuine_points(args)
        targets = [(build_zappa(_build(p)), p) for p in points]
    else:
        raise UsageError("give --pair or --family")

    reports = []
    for zs, params in targets:
        claims = applicable_claims(params) if args.all_claims or not args.claim else list(args.claim)
        reports.append(verify_point(zs, claims, params=params, cap=args.cap, workers=args.workers))
    verdict = all(r.verdict for r in reports)
    _emit(VerifyReport(points=reports, verdict=verdict).to_json(), args.output)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_search(args: Namespace) -> int:
    workers = args.workers if args.workers else get_workers()
    if args.family == "l2":
        rows = sweep_l2(args.m_min or 2, args.m_max, workers=workers, cap=args.cap)
        bounds = f"m={args.m_min or 2}..{args.m_max}"
    else:
        if args.p is None:
            raise UsageError("--family m3 needs --p")
        rows = sweep_m3(args.p, args.m_max, m_min=args.m_min, workers=workers, cap=args.cap)
        bounds = f"p={args.p},m={args.m_min or args.p}..{args.m_max}"

    if args.store:
        database.init_db()
        db = database.SessionLocal()
        try:
            run = crud.create_run(db, args.family, bounds)
            stored = crud.add_points(db, run, rows)
            logger.info("stored %d points as run %d", stored, run.id)
        finally:
            db.close()

    _emit(render_rows(rows, args.family, args.format), args.output)
    mismatched = any(r.match is False for r in rows)
    return EXIT_FAIL if mismatched else EXIT_OK


def cmd_runs(args: Namespace) -> int:
    database.init_db()
    db = database.SessionLocal()
    try:
        if args.run_id is None:
            lines = [f"{'ID':<5} {'Family':<7} {'Bounds':<20} {'Points':<7} {'Mismatches':<10} Created"]
            for run in crud.list_runs(db, family=args.family):
                lines.append(
                    f"{run.id:<5} {run.family:<7} {run.bounds or '':<20} "
                    f"{crud.count_points(db, run.id):<7} {crud.count_points(db, run.id, mismatches_only=True):<10} "
                    f"{run.created_at.isoformat() if run.created_at else 'N/A'}"
                )
            _emit("\n".join(lines), args.output)
            return EXIT_OK
        run = crud.get_run(db, args.run_id)
        if run is None:
            raise UsageError(f"no stored run with id {args.run_id}")
        points = crud.get_points(db, run.id, mismatches_only=args.mismatches)
        rows = [crud.point_to_row(pt, run.family) for pt in points]
        _emit(render_rows(rows, run.family, args.format), args.output)
        return EXIT_OK
    finally:
        db.close()


def _add_input_args(p: ArgumentParser) -> None:
    p.add_argument("--pair", help="pair or group JSON document")
    p.add_argument("--group", dest="pair", help="alias of --pair")
    p.add_argument("--family", choices=["l2", "m3"])
    p.add_argument("--m", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--lambda", dest="lam", type=int)


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="brute-force cap on |G| (default ZAPPA_MAX_GROUP_ORDER)")
    common.add_argument("--workers", type=int, default=None, help="parallelism (default 1, ZAPPA_WORKERS for search)")
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = ArgumentParser(prog="zappa", description="Automorphisms of Zappa-Szép products of finite groups")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    p = subparsers.add_parser("construct", parents=[common], help="Build a product group and write its JSON")
    _add_input_args(p)

    p = subparsers.add_parser("validate", parents=[common], help="Check C1..C6 for a pair")
    _add_input_args(p)
    p.add_argument("--all-witnesses", action="store_true")

    p = subparsers.add_parser("aut", parents=[common], help="Enumerate Aut(G)")
    _add_input_args(p)
    p.add_argument("--matrices", action="store_true", help="include the (α, β, γ, δ) tables")

    p = subparsers.add_parser("verify", parents=[common], help="Check claims on one group or every genuine point of a modulus")
    _add_input_args(p)
    p.add_argument("--claim", action="append", choices=list(CLAIMS))
    p.add_argument("--all-claims", action="store_true")

    p = subparsers.add_parser("search", parents=[common], help="Sweep a parameter space")
    p.add_argument("--family", choices=["l2", "m3"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--m-min", type=int)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--store", action="store_true", help="persist rows to DATABASE_URL")

    p = subparsers.add_parser("runs", parents=[common], help="List stored sweeps or show one")
    p.add_argument("--family", choices=["l2", "m3"])
    p.add_argument("--run-id", type=int)
    p.add_argument("--mismatches", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


COMMANDS = {
    "construct": cmd_construct,
    "validate": cmd_validate,
    "aut": cmd_aut,
    "verify": cmd_verify,
    "search": cmd_search,
    "runs": cmd_runs,
}


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE
    if args.cap is None:
        args.cap = get_max_group_order()
    if args.cap < 1:
        parser.error("--cap must be at least 1")
    if args.workers is None and args.command != "search":
        args.workers = 1
    try:
        return COMMANDS[args.command](args)
    except ZappaError as e:
        logger.error("%s: %s", type(e).__name__, e)
        if e.witness:
            logger.error("witness: %s", json.dumps(e.witness, default=str))
        return EXIT_USAGE
    except (OSError, ValueError, ValidationError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except Exception:
        logger.exception("Unexpected error")
        return EXIT_USAGE


def main() -> None:
    configure_logging()
    _init_sentry()
    sys.exit(run())
