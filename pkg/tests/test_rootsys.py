'''Tests of hoflow.rootsys'''
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hoflow.rootsys import RootSystemBC

@pytest.mark.parametrize("rank, n_roots, order", [(1, 2, 2), (2, 6, 8), (3, 12, 48)])
def test_sizes(rank, n_roots, order):
    rs = RootSystemBC(rank)
    assert len(rs.positive_roots) == n_roots
    assert rs.order == order
    assert rs.root_classes.count("long") == rank
    assert rs.root_classes.count("middle") == rank * (rank - 1)

@pytest.mark.parametrize("rank, p", [(0, 2.0), (7, 2.0), (2, 0.0), (2, -1.0)])
def test_invalid_construction(rank, p):
    with pytest.raises(ValueError):
        RootSystemBC(rank, p)

def test_root_norms_follow_long_norm():
    rs = RootSystemBC(2, long_norm=3.0)
    norms = np.sqrt(rs.root_norms2)
    np.testing.assert_allclose(norms[rs.class_mask("long")], 3.0)
    np.testing.assert_allclose(norms[rs.class_mask("short")], 1.5)
    np.testing.assert_allclose(norms[rs.class_mask("middle")], 1.5 * np.sqrt(2.0))

def test_simple_roots_and_heights(rs2):
    np.testing.assert_allclose(rs2.simple_roots, [[1.0, 0.0], [-1.0, 1.0]])
    # every positive root has nonnegative integral simple coordinates
    assert np.all(rs2.root_simple_coords >= 0)
    assert rs2.root_heights.min() == 1
    # beta_2 = 2 e_2 = 2 sigma_1 + 2 sigma_2
    assert rs2.root_heights.max() == 4

def test_dominant_representative(rs2):
    dom, w = rs2.dominant_representative([-3.0, 1.0])
    np.testing.assert_allclose(dom, [1.0, 3.0])
    np.testing.assert_allclose(rs2.weyl_act(w, [-3.0, 1.0]), dom)

def test_group_operations(rs3):
    for w in range(0, rs3.order, 7):
        assert rs3.compose(w, rs3.inverse(w)) == 0
    a, b = 5, 17
    np.testing.assert_allclose(rs3.weyl[rs3.compose(a, b)], rs3.weyl[a] @ rs3.weyl[b])

def test_reflection_table(rs2):
    for a, alpha in enumerate(rs2.positive_roots):
        refl = rs2.reflection_matrix(alpha)
        np.testing.assert_allclose(refl @ alpha, -alpha)
        for w in range(rs2.order):
            np.testing.assert_allclose(rs2.weyl[rs2.reflection_table[a, w]], refl @ rs2.weyl[w])

def test_index_of_rejects_non_weyl(rs2):
    with pytest.raises(KeyError):
        rs2.index_of(np.array([[1, 1], [0, 1]]))

def test_pairings_and_walls(rs2):
    np.testing.assert_allclose(rs2.pairings([0.0, 2.0])[rs2.class_mask("long")], [0.0, 1.0])
    assert rs2.wall_margin([0.5, 1.5]) == pytest.approx(0.5)
    assert rs2.wall_margin([1.5, 0.5]) < 0
    assert not rs2.is_regular([1.0, 1.0])
    assert rs2.is_regular([0.5, 1.5], margin=0.4)

def test_is_root(rs2):
    assert rs2.is_root([-1.0, 0.0])
    assert rs2.is_root([1.0, 1.0])
    assert not rs2.is_root([1.0, 2.0])

def test_enumerate_cone(rs2):
    cone = rs2.enumerate_cone(3)
    assert len(cone) == 10
    assert [pt.height for pt in cone] == sorted(pt.height for pt in cone)
    with pytest.raises(ValueError):
        rs2.enumerate_cone(-1)

@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3))
@settings(max_examples=50, deadline=None)
def test_simple_coords_inverse(values):
    rs = RootSystemBC(3)
    np.testing.assert_allclose(rs.from_simple_coords(rs.simple_coords(values)), values, atol=1e-12)

@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=2))
@settings(max_examples=50, deadline=None)
def test_dominant_representative_is_dominant(values):
    rs = RootSystemBC(2)
    dom, _ = rs.dominant_representative(values)
    assert 0.0 <= dom[0] <= dom[1]
    np.testing.assert_allclose(np.sort(np.abs(values)), dom)
