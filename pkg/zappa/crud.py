"""CRUD operations for stored sweeps."""

from typing import Optional

from sqlalchemy.orm import Session

from . import models
from .schemas import L2SweepRow, M3SweepRow


def create_run(db: Session, family: str, bounds: str) -> models.SweepRun:
    run = models.SweepRun(family=family, bounds=bounds)
    db.add(run)
    db.commit()
    db.refresh(run)
    return run


def add_points(db: Session, run: models.SweepRun, rows: list) -> int:
    """Store sweep rows under a run, keeping their order.

    Args:
        db: Database session.
        run: The run the rows belong to.
        rows: L2SweepRow or M3SweepRow instances.

    Returns:
        int: Number of points stored.
    """
    start = count_points(db, run.id)
    for offset, row in enumerate(rows):
        data = row.model_dump()
        db.add(models.SweepPoint(run_id=run.id, position=start + offset, **data))
    db.commit()
    return len(rows)


def get_run(db: Session, run_id: int) -> Optional[models.SweepRun]:
    return db.query(models.SweepRun).filter(models.SweepRun.id == run_id).first()


def list_runs(db: Session, family: Optional[str] = None):
    """Get stored runs, newest first.

    Args:
        db: Database session.
        family: Only runs of this family when given.

    Returns:
        list[SweepRun]: Matching runs.
    """
    query = db.query(models.SweepRun)
    if family:
        query = query.filter(models.SweepRun.family == family)
    return query.order_by(models.SweepRun.id.desc()).all()


def get_points(db: Session, run_id: int, mismatches_only: bool = False):
    query = db.query(models.SweepPoint).filter(models.SweepPoint.run_id == run_id)
    if mismatches_only:
        query = query.filter(models.SweepPoint.match == False)  # noqa: E712
    return query.order_by(models.SweepPoint.position).all()


def count_points(db: Session, run_id: int, mismatches_only: bool = False) -> int:
    query = db.query(models.SweepPoint).filter(models.SweepPoint.run_id == run_id)
    if mismatches_only:
        query = query.filter(models.SweepPoint.match == False)  # noqa: E712
    return query.count()


def point_to_row(point: models.SweepPoint, family: str):
    """Rebuild the sweep row a stored point came from."""
    fields = L2SweepRow.model_fields if family == "l2" else M3SweepRow.model_fields
    data = {name: getattr(point, name) for name in fields}
    return (L2SweepRow if family == "l2" else M3SweepRow).model_validate(data)
