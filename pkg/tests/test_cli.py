"""Tests for the command-line front end."""

import json

import pytest
from sqlalchemy.orm import sessionmaker

from tests.conftest import direct_pair
from zappa import database
from zappa.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from zappa.group_core import cyclic_group
from zappa.matched_pair import MatchedPair


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(direct_pair(4, 2).to_document().to_json())
    return str(path)


@pytest.fixture
def broken_pair_file(tmp_path):
    H, K = cyclic_group(3), cyclic_group(2)
    mp = MatchedPair.from_tables(H, K, [[0, 1, 2], [0, 1, 1]], [[0, 0, 0], [1, 1, 1]])
    path = tmp_path / "broken.json"
    path.write_text(mp.to_document().to_json())
    return str(path)


@pytest.fixture
def sweep_db(tmp_path, monkeypatch):
    """Point the CLI at a throwaway SQLite file."""
    engine = database.make_engine(f"sqlite:///{tmp_path / 'sweeps.db'}")
    monkeypatch.setattr(database, "engine", engine)
    monkeypatch.setattr(database, "SessionLocal", sessionmaker(autocommit=False, autoflush=False, bind=engine))
    return engine


class TestConstruct:
    """Test the construct command."""

    def test_no_command(self):
        assert run([]) == EXIT_USAGE

    def test_family_to_stdout(self, capsys):
        assert run(["construct", "--family", "l2", "--m", "8", "--s", "3", "--t", "1"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema"] == "1"
        assert doc["n"] == 32
        assert doc["params"] == {"m": 8, "s": 3, "t": 1}

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "group.json"
        assert run(["construct", "--family", "m3", "--p", "3", "--m", "9", "--r", "1", "--lambda", "1", "--output", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        doc = json.loads(out.read_text())
        assert doc["n"] == 81
        assert doc["params"]["lambda"] == 1

    def test_missing_parameters(self):
        assert run(["construct", "--family", "l2", "--m", "8"]) == EXIT_USAGE
        assert run(["construct", "--family", "l2", "--s", "3", "--t", "1"]) == EXIT_USAGE
        assert run(["construct"]) == EXIT_USAGE

    def test_invalid_parameters(self):
        assert run(["construct", "--family", "l2", "--m", "8", "--s", "3", "--t", "0"]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert run(["construct", "--pair", str(tmp_path / "absent.json")]) == EXIT_USAGE

    def test_cap_must_be_positive(self):
        with pytest.raises(SystemExit):
            run(["construct", "--family", "l2", "--m", "8", "--s", "3", "--t", "1", "--cap", "0"])


class TestValidate:
    """Test the validate command."""

    def test_valid_pair(self, pair_file, capsys):
        assert run(["validate", "--pair", pair_file]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["passed"] is True
        assert out["kind"] == "direct"

    def test_product_document(self, tmp_path, capsys):
        out = tmp_path / "group.json"
        run(["construct", "--family", "l2", "--m", "8", "--s", "3", "--t", "1", "--output", str(out)])
        assert run(["validate", "--group", str(out)]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["kind"] == "genuine"

    def test_broken_pair(self, broken_pair_file, capsys):
        assert run(["validate", "--pair", broken_pair_file, "--all-witnesses"]) == EXIT_FAIL
        out = json.loads(capsys.readouterr().out)
        assert out["passed"] is False
        assert any(r["witnesses"] for r in out["results"] if not r["passed"])


class TestAut:
    """Test the aut command."""

    def test_direct_product(self, pair_file, capsys):
        assert run(["aut", "--pair", pair_file, "--matrices"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["aut_order"] == 8
        assert out["group_order"] == 8
        assert len(out["matrices"]) == 8

    def test_cap(self):
        assert run(["aut", "--family", "l2", "--m", "8", "--s", "3", "--t", "1", "--cap", "16"]) == EXIT_USAGE


class TestVerify:
    """Test the verify command."""

    def test_pair_default_claims(self, pair_file, capsys):
        assert run(["verify", "--pair", pair_file]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] is True
        assert [c["claim"] for c in out["points"][0]["claims"]] == ["matched-pair", "correspondence", "abcd"]

    def test_order_claim(self, capsys):
        assert run(["verify", "--family", "l2", "--m", "8", "--s", "3", "--t", "1", "--claim", "order"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["points"][0]["claims"][0]["details"]["brute_force"] == 64

    def test_failing_claim(self):
        assert run(["verify", "--family", "l2", "--m", "8", "--s", "1", "--t", "1", "--claim", "abcd"]) == EXIT_FAIL

    def test_corrupted_pair_is_a_claim_failure(self, broken_pair_file, capsys):
        assert run(["verify", "--pair", broken_pair_file, "--claim", "abcd"]) == EXIT_FAIL
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] is False
        claim = out["points"][0]["claims"][0]
        assert claim["claim"] == "matched-pair"
        assert claim["verdict"] is False
        assert claim["witness"]["check"] in claim["details"]
        assert claim["details"][claim["witness"]["check"]] is False

    def test_family_claim_on_pair(self, pair_file):
        assert run(["verify", "--pair", pair_file, "--claim", "order"]) == EXIT_USAGE

    def test_every_genuine_point(self, capsys):
        assert run(["verify", "--family", "l2", "--m", "8", "--claim", "order"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert len(out["points"]) == 20


class TestSearch:
    """Test the search and runs commands."""

    def test_l2_csv(self, capsys):
        assert run(["search", "--family", "l2", "--m-min", "8", "--m-max", "8", "--workers", "1"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("schema,m,s,t")
        assert len(lines) == 25

    def test_m3_needs_prime(self):
        assert run(["search", "--family", "m3", "--m-max", "9", "--workers", "1"]) == EXIT_USAGE

    def test_scale_error(self):
        assert run(["search", "--family", "l2", "--m-max", "8", "--cap", "16", "--workers", "1"]) == EXIT_USAGE

    def test_store_and_list(self, sweep_db, capsys):
        assert run(["search", "--family", "l2", "--m-min", "8", "--m-max", "8", "--workers", "1", "--store"]) == EXIT_OK
        capsys.readouterr()

        assert run(["runs"]) == EXIT_OK
        listing = capsys.readouterr().out.splitlines()
        assert listing[0].split()[:3] == ["ID", "Family", "Bounds"]
        assert listing[1].split()[:4] == ["1", "l2", "m=8..8", "24"]

        assert run(["runs", "--run-id", "1", "--format", "json"]) == EXIT_OK
        stored = json.loads(capsys.readouterr().out)
        assert len(stored["rows"]) == 24

        assert run(["runs", "--run-id", "1", "--mismatches"]) == EXIT_OK
        assert len(capsys.readouterr().out.splitlines()) == 1

    def test_unknown_run(self, sweep_db):
        assert run(["runs", "--run-id", "7"]) == EXIT_USAGE
