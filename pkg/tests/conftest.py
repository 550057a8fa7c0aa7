import json
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from group_engine import CoxeterKind, CoxeterSpec, ProductConvention, build_group  # noqa: E402
from nc_lattice import build_nc  # noqa: E402
from pop_dynamics import scan_group  # noqa: E402
from utils.run_config import RunConfig  # noqa: E402
from utils.session import Session  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


_contexts = {}
_lattices = {}
_scans = {}


def context(cox_type, rank, convention=ProductConvention.LEFT_TO_RIGHT, coxeter="standard"):
    """Contexts shared across the whole test run"""
    key = (cox_type, rank, convention, coxeter)
    if key not in _contexts:
        spec = CoxeterSpec(CoxeterKind.BIPARTITE) if coxeter == "bipartite" else CoxeterSpec()
        _contexts[key] = build_group(cox_type, rank, convention, spec)
    return _contexts[key]


def lattice(ctx):
    key = (ctx.label, ctx.c, ctx.convention)
    if key not in _lattices:
        _lattices[key] = build_nc(ctx)
    return _lattices[key]


def scan(ctx):
    key = (ctx.label, ctx.c, ctx.convention)
    if key not in _scans:
        _scans[key] = scan_group(ctx, lattice(ctx))
    return _scans[key]


@pytest.fixture
def make_context():
    return context


@pytest.fixture
def make_lattice():
    return lattice


@pytest.fixture
def make_scan():
    return scan


@pytest.fixture
def a3():
    return context("A", 3)


@pytest.fixture
def a5():
    return context("A", 5)


@pytest.fixture
def session(tmp_path):
    return Session(RunConfig(cache_dir=str(tmp_path / "cache"), export_dir=str(tmp_path / "exports")))


@pytest.fixture
def config_file(tmp_path):
    """A config.json pointing the cache and exports into tmp_path"""
    path = tmp_path / "config.json"
    settings = {
        "max_group_order": 700000,
        "max_nc_size": 30000,
        "cache_dir": str(tmp_path / "cache"),
        "cache_enabled": True,
        "output_format": "text",
        "export_dir": str(tmp_path / "exports"),
        "jobs": 1,
        "seed": 7,
        "product_convention": "left_to_right",
        "projection_mode": "lattice",
    }
    path.write_text(json.dumps(settings))
    return str(path)
