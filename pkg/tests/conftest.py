"""Pytest configuration and fixtures."""

import os
import tempfile

import numpy as np
import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from zappa.aut_engine import MatrixGroup
from zappa.family_l2 import L2Params, build_l2
from zappa.family_m3 import M3Params, build_m3
from zappa.group_core import cyclic_group
from zappa.matched_pair import MatchedPair, build_zappa
from zappa.models import Base


@pytest.fixture(scope="session")
def temp_db_file():
    """Create a temporary SQLite database file for testing.

    Yields:
        str: Path to temporary database file.
    """
    fd, path = tempfile.mkstemp(suffix=".db")
    os.close(fd)
    yield path
    os.unlink(path)


@pytest.fixture
def test_db(temp_db_file):
    """Create a test database with fresh schema for each test.

    Yields:
        Session: SQLAlchemy session connected to test database.
    """
    DATABASE_URL = f"sqlite:///{temp_db_file}"
    engine = create_engine(
        DATABASE_URL, connect_args={"check_same_thread": False}
    )
    TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

    Base.metadata.create_all(bind=engine)

    db = TestingSessionLocal()
    yield db
    db.close()

    Base.metadata.drop_all(bind=engine)


def direct_pair(nh: int, nk: int) -> MatchedPair:
    """Z_nh × Z_nk as a matched pair with both actions trivial."""
    H, K = cyclic_group(nh, "b"), cyclic_group(nk, "a")
    sigma = np.tile(np.arange(nh), (nk, 1))
    theta = np.tile(np.arange(nk)[:, None], (1, nh))
    return MatchedPair.from_tables(H, K, sigma, theta)


@pytest.fixture(scope="session")
def z4_x_z2():
    return build_zappa(direct_pair(4, 2))


@pytest.fixture(scope="session")
def z4_x_z2_aut(z4_x_z2):
    return MatrixGroup.enumerate(z4_x_z2)


@pytest.fixture(scope="session")
def z4_x_z8_aut():
    return MatrixGroup.enumerate(build_zappa(direct_pair(4, 8)))


@pytest.fixture(scope="session")
def l2_831():
    return build_zappa(build_l2(L2Params(8, 3, 1)))


@pytest.fixture(scope="session")
def l2_831_aut(l2_831):
    return MatrixGroup.enumerate(l2_831)


@pytest.fixture(scope="session")
def l2_871_aut():
    return MatrixGroup.enumerate(build_zappa(build_l2(L2Params(8, 7, 1))))


@pytest.fixture(scope="session")
def l2_811_aut():
    return MatrixGroup.enumerate(build_zappa(build_l2(L2Params(8, 1, 1))))


@pytest.fixture(scope="session")
def l2_812_aut():
    return MatrixGroup.enumerate(build_zappa(build_l2(L2Params(8, 1, 2))))


@pytest.fixture(scope="session")
def m3_3911_aut():
    return MatrixGroup.enumerate(build_zappa(build_m3(M3Params(3, 9, 1, 1))))
