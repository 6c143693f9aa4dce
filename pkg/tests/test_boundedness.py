'''Tests of hoflow.analysis.boundedness'''
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hoflow import config
from hoflow.jobstarters import LocalJobStarter
from hoflow.runners import run_checks
from hoflow.analysis import hull_checks
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, rho, rho_2lt
from hoflow.analysis.boundedness import (in_hull, hull_margin, hull_oracle, bdd_hypotheses, is_bounded, fundamental_coweight, growth_direction, push_outside,
                                         ray_values, deformed_envelope, HullOracleAgreement, HullVectorIdentity, BoundedInside, UnboundedOutside)

def test_in_hull_examples(rs2):
    assert in_hull(rs2, [1.0, 3.0], [0.0, 0.0])
    assert in_hull(rs2, [2.0, 4.0], [-4.0, 2.0])
    assert in_hull(rs2, [2.0, 4.0], [2.0, 4.0])
    assert not in_hull(rs2, [2.0, 4.0], [2.1, 4.0])
    assert not in_hull(rs2, [2.0, 4.0], [0.0, 4.5])
    # (3, 3) is dominated by (2, 4): 4 - 3 = 1 and (2 + 4) - (3 + 3) = 0
    assert hull_margin(rs2, [2.0, 4.0], [3.0, 3.0]) == pytest.approx(0.0, abs=1e-12)

@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-6.0, 6.0, allow_nan=False), min_size=2, max_size=2), st.lists(st.floats(0.0, 4.0), min_size=2, max_size=2))
def test_dominance_test_matches_vertex_oracle(xi, hull):
    rs = RootSystemBC(2)
    hull = np.array([hull[0], hull[0] + hull[1]])
    margin = hull_margin(rs, hull, xi)
    if abs(margin) < 1e-6:
        return
    assert in_hull(rs, hull, xi) == hull_oracle(rs, hull, xi)[0]

def test_vertex_oracle_rejects_points_far_outside(rs2):
    # (3, 0) has dominant representative (0, 3), and 2 - 3 < 0
    member, residual = hull_oracle(rs2, [1.0, 2.0], [3.0, 0.0])
    assert not member
    assert residual > 1e-3
    assert not in_hull(rs2, [1.0, 2.0], [3.0, 0.0])
    member, residual = hull_oracle(rs2, [1.0, 2.0], [0.5, -1.0])
    assert member
    assert residual <= 1e-7

def test_vertex_oracle_agrees_on_a_grid(rs2):
    hull = np.array([1.0, 2.0])
    for xi in np.mgrid[-4.0:4.5:0.5, -4.0:4.5:0.5].reshape(2, -1).T:
        if abs(hull_margin(rs2, hull, xi)) > 1e-6:
            assert in_hull(rs2, hull, xi) == hull_oracle(rs2, hull, xi)[0], xi

def test_bdd_hypotheses():
    assert bdd_hypotheses(Multiplicity(2, 2, 1)) == (True, "")
    ok, advisory = bdd_hypotheses(Multiplicity(-1, 1, 2))
    assert not ok and "M1" in advisory
    assert bdd_hypotheses(Multiplicity(4, 1, 3), Deformation(1.0, 0.5))[0]
    ok, advisory = bdd_hypotheses(Multiplicity(4, 1, 0.5), Deformation(1.0, 0.5))
    assert not ok and "m_l" in advisory
    ok, advisory = bdd_hypotheses(Multiplicity(4, 0, 3), Deformation(1.0, 0.0))
    assert not ok and "ell_tilde" in advisory

def test_is_bounded_undeformed(rs2):
    m = Multiplicity(2, 2, 1)
    hull = rho(rs2, m)
    assert is_bounded(rs2, m, 0.5 * hull).verdict == "bounded"
    assert is_bounded(rs2, m, hull + 3j).verdict == "bounded"
    query = is_bounded(rs2, m, 1.2 * hull)
    assert query.verdict == "unbounded"
    assert query.hypotheses_ok
    np.testing.assert_allclose(query.hull_vector, [2.0, 4.0])

def test_is_bounded_deformed(rs2):
    m = Multiplicity(4, 1, 3)
    query = is_bounded(rs2, m, [5.0, 8.0], Deformation(1.0, 0.5))
    np.testing.assert_allclose(query.hull_vector, [5.0, 8.0])
    assert query.verdict == "bounded"
    assert is_bounded(rs2, m, [5.0, 8.5], Deformation(1.0, 0.5)).verdict == "unbounded"
    # ell = ell_max
    query = is_bounded(rs2, m, [0.0, 0.0], Deformation(5.0, 0.5))
    assert query.verdict is None
    assert query.to_dict()["ell"] == 5.0

def test_is_bounded_outside_hypotheses_is_advisory(rs2):
    query = is_bounded(rs2, Multiplicity(-1, 1, 2), [0.0, 0.0])
    assert not query.hypotheses_ok
    assert query.verdict == "bounded"
    assert "M1" in query.advisory

def test_growth_direction(rs2):
    np.testing.assert_allclose(fundamental_coweight(rs2, 1), [1.0, 1.0])
    np.testing.assert_allclose(fundamental_coweight(rs2, 2), [0.0, 1.0])
    with pytest.raises(ValueError):
        fundamental_coweight(rs2, 3)
    direction, rate = growth_direction(rs2, [2.0, 4.0], [3.0, 5.0])
    np.testing.assert_allclose(direction, np.array([1.0, 1.0]) / np.sqrt(2.0))
    assert rate == pytest.approx(np.sqrt(2.0))
    assert growth_direction(rs2, [2.0, 4.0], [1.0, 1.0])[1] < 0

def test_push_outside(rs2):
    # simple coordinates: (2, 4) -> (6, 4) and (1, 1) -> (2, 1); the ray leaves the hull at 3 (1, 1)
    xi, direction, rate = push_outside(rs2, [2.0, 4.0], [1.0, -1.0], 0.5)
    np.testing.assert_allclose(direction, np.array([1.0, 1.0]) / np.sqrt(2.0))
    np.testing.assert_allclose(xi, 3.0 + 0.5 / np.sqrt(2.0) * np.ones(2))
    assert rate == pytest.approx(0.5)
    assert hull_margin(rs2, [2.0, 4.0], xi) < 0
    xi, direction, rate = push_outside(rs2, [2.0, 4.0], [0.0, 0.0], 0.5)
    np.testing.assert_allclose(xi, [2.0, 4.5])
    assert rate == pytest.approx(0.5)

@pytest.mark.parametrize("deformed", [False, True])
def test_outside_samples_keep_a_relative_margin(rs2, deformed):
    check = UnboundedOutside(2, deformed=deformed)
    params = check.sample(8, seed=3)
    assert len(params) == 8
    for p in params:
        m = Multiplicity(*p["m"])
        hull = rho_2lt(rs2, m, Deformation(*p["d"]) if deformed else None)
        push = max(config.OUTSIDE_MARGIN * np.linalg.norm(hull), config.OUTSIDE_MIN_RATE)
        assert p["rate"] == pytest.approx(push)
        assert p["hull_margin"] < 0
        assert growth_direction(rs2, hull, np.real(p["lam"]))[1] >= push - 1e-9

def test_deformed_envelope(rs1, rs2):
    m = Multiplicity(4, 0, 3, rank=1)
    assert deformed_envelope(rs1, m, Deformation(), [3.0]) == 1.0
    # ell' = max(1, -1 + 3 - 1) = 1 and delta = beta_1 / 2
    assert deformed_envelope(rs1, m, Deformation(1.0, 0.0), [1.0]) == pytest.approx(np.e / np.cosh(1.0))
    assert deformed_envelope(rs2, Multiplicity(4, 1, 3), Deformation(1.0, 0.5), [0.0, 0.0]) == pytest.approx(1.0)

def test_ray_values_rank_one(rs1):
    t_grid = np.array([0.5, 1.0, 2.0])
    values = ray_values(rs1, Multiplicity(2, 0, 0, rank=1), [0.5], [1.0], t_grid)
    np.testing.assert_allclose(values, np.sinh(0.5 * t_grid) / (0.5 * np.sinh(t_grid)), rtol=1e-6)

@pytest.mark.parametrize("rank", [1, 2])
def test_fast_hull_checks_pass(rank):
    jobstarter = LocalJobStarter(1)
    assert HullOracleAgreement(rank).run(n=40, seed=1, jobstarter=jobstarter).passed
    assert HullVectorIdentity(rank).run(n=20, seed=1, jobstarter=jobstarter).passed

@pytest.mark.slow
@pytest.mark.parametrize("check_class", [BoundedInside, UnboundedOutside])
def test_ray_probes_rank_one(check_class):
    report = check_class(rank=1, tol=1e-9).run(n=4, seed=0, jobstarter=LocalJobStarter(1))
    assert report.passed, report.witnesses

@pytest.mark.slow
@pytest.mark.parametrize("check_class", [BoundedInside, UnboundedOutside])
@pytest.mark.parametrize("deformed", [False, True])
def test_ray_probes_rank_two(check_class, deformed):
    report = check_class(rank=2, tol=1e-9, deformed=deformed).run(n=4, seed=0, jobstarter=LocalJobStarter(1))
    assert report.passed, report.witnesses

@pytest.mark.slow
def test_hull_suite_rank_two():
    reports = run_checks(hull_checks(2, tol=1e-9), n=4, seed=1, jobstarter=LocalJobStarter(1))
    assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed]
