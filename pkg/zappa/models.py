import datetime

from sqlalchemy import Boolean, Column, DateTime, ForeignKey, Integer, String
from sqlalchemy.orm import declarative_base
from sqlalchemy.orm import relationship

Base = declarative_base()


class SweepRun(Base):
    __tablename__ = "sweep_runs"
    id = Column(Integer, primary_key=True, index=True)
    family = Column(String, nullable=False)  # l2/m3
    bounds = Column(String)  # e.g. "m=2..16" or "p=3,m=3..24"
    schema_version = Column(String, default="1")
    created_at = Column(DateTime, default=datetime.datetime.utcnow)
    points = relationship("SweepPoint", back_populates="run", cascade="all, delete-orphan")


class SweepPoint(Base):
    __tablename__ = "sweep_points"
    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("sweep_runs.id"), index=True, nullable=False)
    position = Column(Integer, nullable=False)
    p = Column(Integer)
    m = Column(Integer, nullable=False)
    s = Column(Integer)
    r = Column(Integer)
    lam = Column(Integer)
    t = Column(Integer, nullable=False)
    tag = Column(String, nullable=False)
    theorem = Column(String)
    branch = Column(String)
    predicted_order = Column(Integer)
    brute_force_order = Column(Integer)
    match = Column(Boolean)
    middle_stratum = Column(Boolean, default=False)
    run = relationship("SweepRun", back_populates="points")
