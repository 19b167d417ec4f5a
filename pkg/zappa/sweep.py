"""Parameter sweeps comparing predicted and brute-force |Aut(G)|."""

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, Optional, Union

from .aut_engine import brute_force_aut
from .config import get_max_group_order
from .errors import FamilyInapplicableError, ScaleError
from .family_l2 import L2Params, build_l2, enumerate_l2_params, predicted_aut_l2
from .family_m3 import M3Params, build_m3, enumerate_m3_params, predicted_aut_m3, require_m3_family
from .matched_pair import SemidirectKind, build_zappa, is_semidirect
from .schemas import SCHEMA_VERSION, L2SweepRow, M3SweepRow, SweepReport

logger = logging.getLogger(__name__)

Row = Union[L2SweepRow, M3SweepRow]


def _run(fn, points: list, workers: int) -> list:
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, points))
    return [fn(p) for p in points]


def _check_scale(orders: Iterable[tuple[dict, int]], cap: int) -> None:
    for params, order in orders:
        if order > cap:
            raise ScaleError(
                f"|G| = {order} for {params} exceeds the brute-force cap {cap}",
                witness={"order": order, "cap": cap, **params},
            )


def l2_row(p: L2Params, cap: Optional[int] = None) -> L2SweepRow:
    row = L2SweepRow(m=p.m, s=p.s, t=p.t, tag=p.tag)
    if p.semidirect:
        return row
    pred = predicted_aut_l2(p)
    row.theorem = pred.theorem
    row.predicted_order = pred.order
    zs = build_zappa(build_l2(p))
    row.brute_force_order = len(brute_force_aut(zs, cap=cap))
    if pred.order is not None:
        row.match = pred.order == row.brute_force_order
    return row


def sweep_l2(m_min: int, m_max: int, workers: int = 1, cap: Optional[int] = None) -> list[L2SweepRow]:
    """One row per admissible (m, s, t), m even in [m_min, m_max], in (m, s, t) order.

    Raises:
        ScaleError: some genuine point has |G| = 4m above the cap; nothing is
            computed in that case.
    """
    cap = cap if cap is not None else get_max_group_order()
    points = [p for m in range(max(2, m_min), m_max + 1) if m % 2 == 0 for p in enumerate_l2_params(m)]
    _check_scale(((p.as_dict(), 4 * p.m) for p in points if not p.semidirect), cap)
    logger.info("L2 sweep over %d points with %d worker(s)", len(points), workers)
    return _run(partial(l2_row, cap=cap), points, workers)


def m3_row(q: M3Params, cap: Optional[int] = None) -> M3SweepRow:
    mp = build_m3(q)
    kind = is_semidirect(mp)
    row = M3SweepRow(p=q.p, m=q.m, r=q.r, lam=q.lam, t=q.t, tag=kind.value)
    if kind is not SemidirectKind.GENUINE:
        return row
    pred = predicted_aut_m3(q, mp)
    row.branch = pred.branch
    row.predicted_order = pred.order
    row.middle_stratum = pred.middle_stratum
    row.brute_force_order = len(brute_force_aut(build_zappa(mp), cap=cap))
    row.match = pred.order == row.brute_force_order
    return row


def sweep_m3(p: int, m_max: int, m_min: Optional[int] = None, workers: int = 1, cap: Optional[int] = None) -> list[M3SweepRow]:
    """One row per admissible (m, r, λ) with p | m ≤ m_max, in that order.

    Raises:
        FamilyInapplicableError: p is not an odd prime.
        ScaleError: some point has |G| = p²m above the cap.
    """
    require_m3_family(p, p)
    cap = cap if cap is not None else get_max_group_order()
    start = max(p, m_min or p)
    moduli = [m for m in range(start, m_max + 1) if m % p == 0]
    points = [q for m in moduli for q in enumerate_m3_params(p, m)]
    _check_scale(((q.as_dict(), p * p * q.m) for q in points), cap)
    logger.info("M3 sweep over %d points with %d worker(s)", len(points), workers)
    return _run(partial(m3_row, cap=cap), points, workers)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def rows_to_csv(rows: list[Row], model: type[Row]) -> str:
    """CSV with a header row and a leading ``schema`` column; LF line endings."""
    fields = [f.alias or name for name, f in model.model_fields.items()]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["schema", *fields])
    for row in rows:
        data = row.model_dump(by_alias=True)
        writer.writerow([SCHEMA_VERSION, *(_cell(data[f]) for f in fields)])
    return out.getvalue()


def rows_to_json(rows: list[Row], family: str) -> str:
    report = SweepReport(family=family, rows=[r.model_dump(by_alias=True) for r in rows])
    return report.to_json()


def render_rows(rows: list[Row], family: str, fmt: str = "csv") -> str:
    if fmt == "json":
        return rows_to_json(rows, family)
    if fmt != "csv":
        raise FamilyInapplicableError(f"unknown output format {fmt!r}")
    return rows_to_csv(rows, L2SweepRow if family == "l2" else M3SweepRow)
