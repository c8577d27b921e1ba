import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphorigami.errors import ValidationError
from sphorigami.flat_fold import (
    VertexPattern,
    alternating_sum,
    composite_reflection,
    fold_oracle,
    ftiling_check,
    kawasaki_check,
    tangent_basis,
)
from sphorigami.sphere_core import random_rotation, random_unit

Z = np.array([0.0, 0.0, 1.0])


def _verdicts(pattern):
    return bool(kawasaki_check(pattern)), ftiling_check(pattern), fold_oracle(pattern)


@pytest.mark.parametrize(
    "angles, foldable",
    [
        ([np.pi / 2] * 4, True),
        ([2 * np.pi / 5, 3 * np.pi / 5, 3 * np.pi / 5, 2 * np.pi / 5], True),
        ([2 * np.pi / 5, 3 * np.pi / 5] * 2, False),
        ([np.pi / 3, np.pi / 2, 2 * np.pi / 3, np.pi / 2], True),
        ([np.pi, np.pi], True),
        ([np.pi / 3, np.pi / 2, np.pi / 2, 2 * np.pi / 3], False),
        ([2 * np.pi / 3] * 3, False),
    ],
)
def test_known_patterns(angles, foldable):
    p = VertexPattern.from_angles(Z, angles)
    assert _verdicts(p) == (foldable,) * 3


def test_face_angles_recovered_and_sorted():
    angles = [0.4, 1.1, 2.0, 2 * np.pi - 3.5]
    p = VertexPattern.from_angles(Z, angles, start=0.7)
    assert np.allclose(p.face_angles, angles, atol=1e-12)
    shuffled = VertexPattern(Z, p.ends[[0, 2, 1, 3]])
    assert np.allclose(shuffled.face_angles, angles, atol=1e-12)


def test_tangent_basis_is_right_handed():
    rng = np.random.default_rng(0)
    for v in random_unit(rng, 50):
        e1, e2 = tangent_basis(v)
        assert np.allclose(np.cross(e1, e2), v, atol=1e-14)
        assert abs(e1 @ v) < 1e-15


def test_repeated_crease_rejected():
    with pytest.raises(ValidationError):
        VertexPattern(Z, np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    with pytest.raises(ValidationError):
        VertexPattern.from_angles(Z, [1.0, 1.0])


def test_odd_count_never_foldable():
    p = VertexPattern.from_angles(Z, [2 * np.pi / 5] * 5)
    res = kawasaki_check(p)
    assert not res.even and not res


def test_composite_of_foldable_pattern_is_identity():
    p = VertexPattern.from_angles(Z, [0.5, 1.2, np.pi - 0.5, np.pi - 1.2])
    rng = np.random.default_rng(1)
    for x in random_unit(rng, 10):
        assert np.allclose(composite_reflection(p, x), x, atol=1e-12)


def test_composite_is_rotation_by_twice_odd_sum():
    angles = np.array([0.5, 1.3, 2.0, 2 * np.pi - 3.8])
    p = VertexPattern.from_angles(Z, angles)
    e1, _ = tangent_basis(Z)
    image = composite_reflection(p, e1)
    turn = np.arctan2(np.cross(e1, image) @ Z, e1 @ image)
    want = (2 * angles[0::2].sum()) % (2 * np.pi)
    assert abs((turn - want + np.pi) % (2 * np.pi) - np.pi) < 1e-12


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 4),
    st.lists(st.floats(0.05, 1.0), min_size=8, max_size=8),
    st.floats(-1e-6, 1e-6),
)
def test_three_checkers_agree(half, weights, bump):
    n = 2 * half
    w = np.array(weights[:n])
    angles = w / w.sum() * 2 * np.pi
    angles[0] += bump
    angles[1] -= bump
    p = VertexPattern.from_angles(Z, angles)
    v = _verdicts(p)
    assert v[0] == v[1] == v[2]


def test_alternating_sum_sign():
    assert alternating_sum([1.0, 2.0, 3.0, 4.0]) == -2.0


def test_rotation_invariance():
    rng = np.random.default_rng(2)
    for _ in range(20):
        R = random_rotation(rng)
        angles = rng.dirichlet(np.ones(6)) * 2 * np.pi
        p = VertexPattern.from_angles(random_unit(rng), angles)
        q = p.rotated(R)
        assert np.allclose(p.face_angles, q.face_angles, atol=1e-12)
        assert _verdicts(p) == _verdicts(q)


def test_cyclic_reindexing_keeps_verdicts():
    rng = np.random.default_rng(3)
    for n in (2, 4, 6, 8):
        odd = rng.dirichlet(np.ones(n // 2)) * np.pi
        even = rng.dirichlet(np.ones(n // 2)) * np.pi
        for angles in (np.ravel(np.column_stack([odd, even])), rng.dirichlet(np.ones(n)) * 2 * np.pi):
            base = _verdicts(VertexPattern.from_angles(Z, angles))
            for k in range(1, n):
                assert _verdicts(VertexPattern.from_angles(Z, np.roll(angles, k))) == base
