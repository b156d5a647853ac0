import glob
import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitespaces import classify, coeff, io, models
from finitespaces.cohomology import cohomology, cohomology_report
from finitespaces.homotopy import core
from finitespaces.sheafmod import structure_sheaf, tensor_modules

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = sorted(glob.glob(os.path.join(models.fixtures_dir(), "*.toml")))
GB = coeff.GB


def total_dim(F, i, w):
    return sum(GB.invariants(cohomology(F, None, i, w), w)["dims"].values())


@pytest.mark.parametrize("path", FIXTURES, ids=os.path.basename)
def test_fixture_validates(path):
    doc = io.load(path)
    assert doc.space.points
    for f in doc.morphisms.values():
        assert f.source is doc.space


@pytest.mark.parametrize("path", [p for p in FIXTURES if "expected" in io.load_raw(p)], ids=os.path.basename)
def test_fixture_matches_expected(path):
    doc = io.load(path)
    X, exp = doc.space, doc.expected
    for key, fn in [("schematic", classify.is_schematic), ("semiseparated", classify.is_semiseparated),
                    ("affine", lambda X: classify.is_affine_certified(X))]:
        if key in exp:
            assert fn(X).value.value == exp[key], key
    if "core_size" in exp:
        assert len(core(X).core.points) == exp["core_size"]
    if "H" in exp:
        rep = cohomology_report(structure_sheaf(X))
        assert {str(i): t for i, t in rep.text.items() if t != "0"} == exp["H"]
    for deg, key in ((0, "h0"), (1, "h1")):
        for n, d in exp.get(key, {}).items():
            F = doc.modules[f"O({n})"]
            assert total_dim(F, deg, X.window) == d
    if "qc_isomorphism" in exp:
        f = next(iter(doc.morphisms.values()))
        assert classify.is_qc_isomorphism(f).value.value == exp["qc_isomorphism"]


def test_shipped_fixtures_match_export(tmp_path):
    import runpy

    mod = runpy.run_path(os.path.join(ROOT, "scripts", "export_fixtures.py"))
    mod["main"](str(tmp_path))
    for path in FIXTURES:
        fresh = tmp_path / os.path.basename(path)
        with open(path, encoding="utf-8") as a:
            assert a.read() == fresh.read_text(encoding="utf-8")


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_twists_multiply(a, b):
    X = models.p1_model((-8, 8))
    T = tensor_modules(models.twist(a, X), models.twist(b, X))
    S = models.twist(a + b, X)
    w = X.window
    for i in (0, 1):
        assert GB.invariants(cohomology(T, None, i, w), w) == GB.invariants(cohomology(S, None, i, w), w)


@pytest.mark.parametrize("n", range(-4, 4))
def test_twist_cohomology_dimensions(n):
    # h0 = max(n+1, 0), h1 = max(-n-1, 0)
    X = models.p1_model((-8, 8))
    F = models.twist(n, X)
    assert total_dim(F, 0, X.window) == max(n + 1, 0)
    assert total_dim(F, 1, X.window) == max(-n - 1, 0)
