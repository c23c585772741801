import math

import numpy as np
import pytest

import ggdd


def test_identities_hold():
    g = ggdd.Grid.torus(8)
    ids = ggdd.identity_ids()
    assert len(ids) >= 17
    assert max(ggdd.run_identity(i, g, seed=3) for i in ids) <= 1e-12
    assert ggdd.run_identity("A.iii", g, negate=True) > 0.1


def test_cohomology_and_exactness():
    assert ggdd.cohomology_dims("derham", ggdd.Grid.torus(4)) == [1, 3, 3, 1]
    assert ggdd.cohomology_dims("gradgrad", ggdd.Grid.box(4)) == [0, 0, 0, 4]
    assert ggdd.complex_defect("gradgrad", ggdd.Grid.box(6)) < 1e-13


def test_constant_matches_eigenvalue():
    c = ggdd.estimate_constant("c_g", ggdd.Grid.box(16))
    assert c["converged"]
    assert c["value"] == pytest.approx(1 / (math.sqrt(3) * math.pi), rel=0.02)


def test_helmholtz_parts_sum_to_input():
    d = ggdd.helmholtz("S", ggdd.Grid.box(5), seed=2)
    total = sum(d["parts"].values())
    assert np.allclose(total, d["input"], atol=1e-12)
    assert d["orthogonality_max"] < 1e-8


def test_solvers_agree():
    g = ggdd.Grid.box(8)
    f = ggdd.sample_f("sin2-3d", 8)
    p = ggdd.solve("primal", g, f)
    for m in ("mixed", "ddz", "decomposed"):
        u = ggdd.solve(m, g, f)["u"]
        assert ggdd.l2_norm(g, u - p["u"]) <= 1e-8 * ggdd.l2_norm(g, p["u"])
    s = ggdd.solve_case("decomposed", "sin2-3d", 8)
    assert s["v_norm"] <= 1e-8 * s["e_norm"]


def test_convergence_rate():
    rows = ggdd.convergence_study("sin2-2d", "decomposed2d", [16, 24, 32])
    assert math.isnan(rows[0]["rate"])
    assert all(abs(r["rate"] - 2.0) < 0.3 for r in rows[1:])


def test_infsup_and_errors():
    r = ggdd.check_infsup(ggdd.Grid.box(6))
    assert r["value"] >= r["bound"] - 0.02
    with pytest.raises(ggdd.Error, match="WrongMode"):
        ggdd.check_infsup(ggdd.Grid.torus(6))
    with pytest.raises(ggdd.Error, match="DimMismatch"):
        ggdd.solve("primal", ggdd.Grid.box(6), np.zeros(3))
