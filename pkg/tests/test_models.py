"""Quaternions, the matrix model spaces, their torus actions and closed forms."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nkm.models import (
    FLAG_CLAIMED_EXTREMUM,
    NU_PREFACTOR,
    DegenerateError,
    Quaternion,
    TorusSpec,
    cp3_components,
    cp3_crit_residual,
    cp3_critical_matrices,
    cp3_homogeneous,
    cp3_nu,
    cp3_nu_gamma_delta,
    flag_basis,
    flag_crit_residual,
    flag_critical_matrix,
    flag_nu,
    flag_nu_zw,
    flag_zw,
    get_space,
    gram,
    j0_matrix,
    normal_form_zero,
    qconj,
    qmul,
    retract,
    s3s3_classify_critical,
    s3s3_crit_residual,
    s3s3_j_matrix,
    s3s3_nu,
    s3s3_point,
    s3s3_xy,
    sp2_basis,
    structure_forms,
)
from nkm.models.quaternion import QUNITS

ONE, QI, QJ, QK = (QUNITS[k] for k in "1ijk")
C = NU_PREFACTOR

SPECS = [
    TorusSpec("s6"),
    TorusSpec("flag"),
    TorusSpec("cp3"),
    TorusSpec("s3s3", (2, 3, 1), (2, 3, 5)),
    TorusSpec("s3s3", (1, -1, 0), (1, 1, -1)),
]
T3 = TorusSpec("s3s3", kind="t3")
IDS = [s.label() for s in SPECS]

quat = arrays(np.float64, 4, elements=st.floats(-2, 2, allow_nan=False, allow_infinity=False))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(77))


# -- quaternions ---------------------------------------------------------------------

def test_quaternion_units():
    assert np.array_equal(qmul(QI, QJ), QK)
    assert np.array_equal(qmul(QJ, QK), QI)
    assert np.array_equal(qmul(QK, QI), QJ)
    for u in (QI, QJ, QK):
        assert np.array_equal(qmul(u, u), -ONE)
    assert Quaternion(0, 1) * Quaternion(0, 0, 1) == Quaternion(0, 0, 0, 1)


@given(quat, quat, quat)
@settings(max_examples=100, deadline=None)
def test_quaternion_algebra(a, b, c):
    np.testing.assert_allclose(qmul(qmul(a, b), c), qmul(a, qmul(b, c)), atol=1e-12)
    np.testing.assert_allclose(qconj(qmul(a, b)), qmul(qconj(b), qconj(a)), atol=1e-12)
    assert np.linalg.norm(qmul(a, b)) == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b), abs=1e-12)


def test_quaternion_complex_pair_convention():
    q = Quaternion.from_complex_pair(1 + 2j, 3 + 4j)
    # (a + b j) with b j = (3 + 4i) j = 3 j + 4 k
    assert q == Quaternion(1, 2, 3, 4)
    assert q.complex_pair() == (1 + 2j, 3 + 4j)


# -- points, retraction and the group law --------------------------------------------------

@pytest.mark.parametrize("name", ["s6", "flag", "cp3", "s3s3"])
def test_random_points_are_valid_and_retract_is_idempotent(name, rng):
    S = get_space(name)
    for _ in range(20):
        p = S.random_point(rng)
        S.check_point(p)
        q = S.retract(p)
        np.testing.assert_allclose(q, p, atol=1e-14)
        np.testing.assert_allclose(S.retract(q), q, atol=1e-15)


def test_retract_repairs_perturbations(rng):
    S = get_space("s6")
    p = S.random_point(rng)
    np.testing.assert_allclose(retract("s6", 1.1 * p), p, atol=1e-15)
    F = get_space("flag")
    q = F.random_point(rng)
    noisy = q + 1e-3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    assert F.membership_residual(retract("flag", noisy)) <= 1e-12
    P = get_space("cp3")
    r = P.random_point(rng)
    noisy = r + 1e-3 * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    assert P.membership_residual(retract("cp3", noisy)) <= 1e-12


@pytest.mark.parametrize("name,bad", [
    ("flag", np.zeros((3, 3))),
    ("cp3", np.zeros((4, 4))),
    ("s3s3", np.zeros((2, 4))),
])
def test_retract_rejects_degenerate_input(name, bad):
    with pytest.raises(DegenerateError):
        retract(name, bad)


@pytest.mark.parametrize("name", ["flag", "cp3", "s3s3"])
def test_check_point_rejects_off_set_points(name, rng):
    S = get_space(name)
    with pytest.raises(ValueError):
        S.check_point(2 * S.random_point(rng))


@pytest.mark.parametrize("spec", SPECS + [T3], ids=IDS + ["s3s3 t3"])
def test_action_group_law(spec, rng):
    S = get_space(spec.space)
    for _ in range(10):
        p = S.random_point(rng)
        s, t = rng.uniform(-np.pi, np.pi, (2, spec.rank))
        np.testing.assert_allclose(S.act(spec, s, S.act(spec, t, p)), S.act(spec, s + t, p), atol=1e-12)
        np.testing.assert_allclose(S.act(spec, np.zeros(spec.rank), p), p, atol=0)
        assert S.membership_residual(S.act(spec, t, p)) <= 1e-10


def test_s3s3_torus_of_type_rs1(rng):
    spec = TorusSpec("s3s3", (1, 0, 0), (0, 1, 0))
    S = get_space("s3s3")
    p = S.random_point(rng)
    th = np.array([0.3, -1.1])
    r, s = (np.array([np.cos(a), np.sin(a), 0, 0]) for a in th)
    np.testing.assert_allclose(S.act(spec, th, p), s3s3_point(qmul(r, p[0]), qmul(s, p[1])), atol=1e-15)


# -- generators against finite differences of the action -----------------------------------------

def _vertical(spec):
    if spec.space == "flag":
        return [np.array(E) for E in flag_basis()[6:]]
    if spec.space == "cp3":
        return [np.array(E) for E in sp2_basis()[6:]]
    return []


def _flat(a):
    a = np.asarray(a)
    return np.concatenate([a.real.ravel(), a.imag.ravel()])


def fd_frame_coords(spec, p, velocity, h=1e-6):
    """Frame coordinates of the orbit velocity, from finite differences alone.

    Columns are central differences of ``step`` along each frame vector plus the
    infinitesimal right action of the isotropy algebra; the orbit velocity is a
    central difference of ``act``.  A least-squares solve reads off the frame part.
    """
    S = get_space(spec.space)
    cols = [_flat(S.step(p, e, h) - S.step(p, e, -h)) / (2 * h) for e in np.eye(6)]
    cols += [_flat(p @ E) for E in _vertical(spec)]
    target = _flat(S.act(spec, h * velocity, p) - S.act(spec, -h * velocity, p)) / (2 * h)
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    assert np.linalg.norm(A @ coef - target) <= 1e-6 * (1 + np.linalg.norm(target))
    return coef[:6]


@pytest.mark.parametrize("spec", SPECS + [T3], ids=IDS + ["s3s3 t3"])
def test_generators_match_finite_differences(spec, rng):
    S = get_space(spec.space)
    A = S.generator_angles(spec)
    for _ in range(10):
        p = S.random_point(rng)
        gens = S.generators(spec, p)
        for k in range(spec.rank):
            np.testing.assert_allclose(gens[k], fd_frame_coords(spec, p, A[k]), atol=1e-5)


def test_flag_generators_from_matrices(rng):
    F = get_space("flag")
    for _ in range(20):
        p = F.random_point(rng)
        for a, b in zip(F.generators(TorusSpec("flag"), p), F.generators_matrix(p)):
            np.testing.assert_allclose(a, b, atol=1e-12)


def test_cp3_generators_from_matrices(rng):
    P = get_space("cp3")
    for _ in range(20):
        p = P.random_point(rng)
        for a, b in zip(P.generators(TorusSpec("cp3"), p), P.generators_matrix(p)):
            np.testing.assert_allclose(a, b, atol=1e-12)


def test_generator_examples():
    F, P, S = get_space("flag"), get_space("cp3"), get_space("s3s3")
    for g in F.generators(TorusSpec("flag"), np.eye(3, dtype=complex)):
        assert not g.any()
    for g in P.generators(TorusSpec("cp3"), np.eye(4, dtype=complex)):
        assert not g.any()
    U, _ = S.generators(TorusSpec("s3s3", (1, 0, 0), (0, 1, 0)), s3s3_point(ONE, ONE))
    # U_1(p, q) = (ip, 0) at (1, 1): the x-part is (1, 0, 0), the y-part vanishes
    np.testing.assert_array_equal(U, [1, 0, 0, 0, 0, 0])


# -- complex structures -----------------------------------------------------------------

@pytest.mark.parametrize("name", ["flag", "cp3"])
def test_j0_squares_to_minus_identity(name):
    J = j0_matrix(name)
    np.testing.assert_allclose(J @ J, -np.eye(6), atol=1e-14)


def _s3s3_ambient_J(p, q, X, Y):
    """``(X - 2 p q^-1 Y, 2 q p^-1 X - Y) / sqrt3`` on tangent vectors at ``(p, q)``."""
    pq, qp = qmul(p, qconj(q)), qmul(q, qconj(p))
    return (X - 2 * qmul(pq, Y)) / np.sqrt(3), (2 * qmul(qp, X) - Y) / np.sqrt(3)


def test_s3s3_j_squares_to_minus_identity(rng):
    S = get_space("s3s3")
    for _ in range(100):
        p, q = S.random_point(rng)
        X = qmul(p, np.concatenate([[0], rng.standard_normal(3)]))
        Y = qmul(q, np.concatenate([[0], rng.standard_normal(3)]))
        JX, JY = _s3s3_ambient_J(p, q, X, Y)
        assert abs(JX @ p) < 1e-12 and abs(JY @ q) < 1e-12
        JJX, JJY = _s3s3_ambient_J(p, q, JX, JY)
        np.testing.assert_allclose(JJX, -X, atol=1e-12)
        np.testing.assert_allclose(JJY, -Y, atol=1e-12)
    J = s3s3_j_matrix()
    np.testing.assert_allclose(J @ J, -np.eye(6), atol=1e-15)


@pytest.mark.parametrize("name", ["flag", "cp3", "s3s3"])
def test_exact_structure_equations(name):
    assert all(r.is_zero() for r in structure_forms(name).residuals().values())


# -- flag -----------------------------------------------------------------------------

def test_flag_zw_at_identity():
    assert all(v == 0 for v in flag_zw(np.eye(3)))


def test_flag_zw_at_printed_matrix():
    w = np.exp(2j * np.pi / 3)
    z1, z2, z3, w1, w2, w3 = flag_zw(flag_critical_matrix())
    assert z3 == pytest.approx(1, abs=1e-15)
    assert w3 == pytest.approx(w, abs=1e-15)


def test_flag_zw_invariant(rng):
    F, spec = get_space("flag"), TorusSpec("flag")
    for _ in range(50):
        p = F.random_point(rng)
        t = rng.uniform(0, 2 * np.pi, 2)
        np.testing.assert_allclose(flag_zw(F.act(spec, t, p)), flag_zw(p), atol=1e-12)


def test_flag_nu_printed_matrix():
    p = flag_critical_matrix()
    assert flag_nu(p) == pytest.approx(-3 * np.sqrt(3) / 2, abs=1e-14)
    assert flag_nu(np.eye(3)) == 0
    # the magnitude stated next to the printed matrix is smaller by a factor 3
    assert abs(flag_nu(p)) / FLAG_CLAIMED_EXTREMUM == pytest.approx(3.0, abs=1e-14)


def test_flag_nu_forms_agree_and_conjugation_flips_sign(rng):
    F = get_space("flag")
    for _ in range(100):
        p = F.random_point(rng)
        assert flag_nu(p) == pytest.approx(flag_nu_zw(p), abs=1e-12)
        assert flag_nu(p.conj()) == pytest.approx(-flag_nu(p), abs=1e-12)


def test_flag_crit_residual_examples():
    assert np.abs(flag_crit_residual(np.eye(3))).max() == 0
    for conj in (False, True):
        assert np.abs(flag_crit_residual(flag_critical_matrix(conj))).max() <= 1e-12


def test_flag_nu_at_printed_matrix_is_extremal(rng):
    F = get_space("flag")
    best = max(abs(flag_nu(F.random_point(rng))) for _ in range(5000))
    assert best <= 3 * np.sqrt(3) / 2 + 1e-12


# -- cp3 ----------------------------------------------------------------------------

def test_cp3_components_identity():
    a, b, g, d = cp3_components(np.eye(4, dtype=complex))
    assert not a.any() and not b.any() and g == 0 and d == 0


def test_cp3_printed_matrices():
    P, Q = cp3_critical_matrices()
    get_space("cp3").check_point(P)
    get_space("cp3").check_point(Q)
    _, _, g, d = cp3_components(P)
    assert g == pytest.approx(0.5j, abs=1e-15)
    assert d == pytest.approx(-0.5, abs=1e-15)
    assert cp3_nu(P) == pytest.approx(-0.75, abs=1e-15)
    assert cp3_nu(Q) == pytest.approx(0.75, abs=1e-15)
    for M in (P, Q):
        assert np.abs(cp3_crit_residual(M)).max() <= 1e-12
    assert cp3_nu(np.eye(4)) == 0
    assert not cp3_crit_residual(np.eye(4, dtype=complex)).any()


def test_cp3_nu_forms_agree_and_invariance(rng):
    P, spec = get_space("cp3"), TorusSpec("cp3")
    for _ in range(100):
        p = P.random_point(rng)
        assert cp3_nu(p) == pytest.approx(cp3_nu_gamma_delta(p), abs=1e-12)
        t = rng.uniform(0, 2 * np.pi, 2)
        assert abs(cp3_nu(P.act(spec, t, p)) - cp3_nu(p)) <= 1e-10


def test_cp3_nu_invariant_under_right_isotropy(rng):
    P = get_space("cp3")
    for _ in range(50):
        p = P.random_point(rng)
        # right factor exp of a random element of sp(1) + u(1)
        X = sum(c * E for c, E in zip(rng.standard_normal(4), sp2_basis()[6:]))
        w, V = np.linalg.eig(X)
        k = (V * np.exp(w)) @ np.linalg.inv(V)
        assert abs(cp3_nu(p @ k) - cp3_nu(p)) <= 1e-10


# -- s3s3 -----------------------------------------------------------------------------

def test_s3s3_xy_examples():
    x, y = s3s3_xy(s3s3_point(ONE, ONE))
    np.testing.assert_array_equal(x, [1, 0, 0])
    np.testing.assert_array_equal(y, [1, 0, 0])
    x, _ = s3s3_xy(s3s3_point(QJ, ONE))
    np.testing.assert_array_equal(x, [-1, 0, 0])


def test_s3s3_xy_unit_and_rotation(rng):
    S = get_space("s3s3")
    spec = TorusSpec("s3s3", (1, 0, 1), (0, 1, 0))
    for _ in range(50):
        p = S.random_point(rng)
        x, y = s3s3_xy(p)
        assert np.linalg.norm(x) == pytest.approx(1, abs=1e-12)
        assert np.linalg.norm(y) == pytest.approx(1, abs=1e-12)
        # conjugation by e^{i t} rotates x about the i-axis
        xt, _ = s3s3_xy(S.act(spec, (rng.uniform(0, 6), 0.0), p))
        assert xt[0] == pytest.approx(x[0], abs=1e-12)


@pytest.mark.parametrize("p,q,expected", [
    (ONE, ONE, C),
    (ONE, QJ, -C),
    (np.array([1, 0, 0, -1]) / np.sqrt(2), np.array([1, 0, 1, 0]) / np.sqrt(2), 0.0),
])
def test_s3s3_nu_examples(p, q, expected):
    pt = s3s3_point(p, q)
    x, y = s3s3_xy(pt)
    assert s3s3_nu(TorusSpec("s3s3", (1, 0, 0), (0, 1, 0)), pt) == pytest.approx(expected, abs=1e-15)


def test_s3s3_nu_zero_for_perpendicular_imaginary_parts():
    # x = (0, 1, 0), y = (0, 0, 1): every term of b1 y1 + b2 x1 + b3 <x, y> vanishes
    p = np.array([1, 0, 0, -1]) / np.sqrt(2)  # conj(p) i p = j
    q = np.array([1, 0, 1, 0]) / np.sqrt(2)   # conj(q) i q = k
    x, y = s3s3_xy(s3s3_point(p, q))
    np.testing.assert_allclose(x, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(y, [0, 0, 1], atol=1e-15)
    for spec in SPECS[3:]:
        assert s3s3_nu(spec, s3s3_point(p, q)) == pytest.approx(0, abs=1e-15)


def test_s3s3_spec_rejects_dependent_weights():
    with pytest.raises(ValueError):
        TorusSpec("s3s3", (1, 2, 3), (2, 4, 6))
    with pytest.raises(ValueError):
        s3s3_classify_critical((0, 0, 0))


def test_s3s3_crit_residual_examples(rng):
    pt = s3s3_point(ONE, ONE)
    assert not s3s3_crit_residual(TorusSpec("s3s3", (1, 0, 0), (0, 1, 0)), pt).any()
    b12 = TorusSpec("s3s3", (0, 0, 1), (2, 3, 0))
    assert tuple(b12.b) == (-3, 2, 0)
    spec = TorusSpec("s3s3", (1, 2, 0), (2, 3, 0))   # b = (0, 0, -1)
    S = get_space("s3s3")
    q = S.random_point(rng)
    # x = y: use the same quaternion twice
    assert np.abs(s3s3_crit_residual(spec, s3s3_point(q[0], q[0]))).max() <= 1e-15
    assert np.abs(s3s3_crit_residual(spec, q)).max() > 1e-3


def test_s3s3_residual_vanishes_with_gradient(rng):
    S = get_space("s3s3")
    for spec in SPECS[3:]:
        for _ in range(50):
            p = S.random_point(rng)
            r = np.linalg.norm(s3s3_crit_residual(spec, p))
            g = np.linalg.norm(S.dnu(spec, p))
            assert (r <= 1e-9) == (g <= 1e-9)


def weights_for(b):
    """Integer rows a1, a2 with a1 x a2 proportional to b (positive factor)."""
    b = np.array(b)
    for a1 in itertools.product(range(-3, 4), repeat=3):
        for a2 in itertools.product(range(-3, 4), repeat=3):
            c = np.cross(a1, a2)
            if c.any() and np.array_equal(c, b):
                return a1, a2
    raise AssertionError(f"no small weights for b = {b}")


@pytest.mark.parametrize("b,levels", [
    ((12, -8, 0), [-20, -4, 4, 20]),
    ((0, 0, 1), [-1, 1]),
    ((1, 1, 2), [-9 / 4, -2, 0, 4]),
])
def test_classification_levels(b, levels):
    got = sorted({float(d.level) for d in s3s3_classify_critical(b)})
    np.testing.assert_allclose(got, levels, atol=1e-15)


def test_classification_extrema_for_b112():
    """Minimum -3/(2 sqrt3) from the mixed family; maximum from x = y = i, checked by evaluation."""
    vals = [d.value for d in s3s3_classify_critical((1, 1, 2))]
    assert min(vals) == pytest.approx(-3 / (2 * np.sqrt(3)), abs=1e-12)
    # x = y = i gives b1 + b2 + b3 = 4, so the maximum is 4 * 2/(3 sqrt3) = 8/(3 sqrt3)
    assert max(vals) == pytest.approx(8 / (3 * np.sqrt(3)), abs=1e-12)
    pt = s3s3_point(ONE, ONE)
    assert s3s3_nu(TorusSpec("s3s3", (1, -1, 0), (1, 1, -1)), pt) == pytest.approx(max(vals), abs=1e-12)


def _sphere_grid(n):
    """Fibonacci points on S^2."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z * z)
    th = np.pi * (1 + 5 ** 0.5) * k
    return np.column_stack([r * np.cos(th), r * np.sin(th), z])


def _reduced(b, x, y):
    return b[0] * y[..., 0] + b[1] * x[..., 0] + b[2] * np.sum(x * y, axis=-1)


def _reduced_residual_vector(b, x, y):
    gx = b[1] * np.eye(3)[0] + b[2] * y
    gy = b[0] * np.eye(3)[0] + b[2] * x
    return np.concatenate([gx - (gx @ x) * x, gy - (gy @ y) * y])


def _reduced_residual(b, x, y):
    return float(np.linalg.norm(_reduced_residual_vector(b, x, y)))


def _unit_from_angles(t, p):
    return np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])


@pytest.mark.parametrize("b", [(12, -8, 0), (0, 0, 1), (1, 1, 2), (2, -3, 1), (-3, 1, 2)])
def test_classification_matches_dense_sampling(b):
    """Critical values reached from a dense grid by Gauss-Newton are classified, and conversely."""
    from scipy.optimize import least_squares

    b = np.array(b, float)
    grid = _sphere_grid(400)
    f = _reduced(b, grid[:, None, :], grid[None, :, :])

    def resid(a):
        return _reduced_residual_vector(b, _unit_from_angles(*a[:2]), _unit_from_angles(*a[2:]))

    def angles(v):
        return [np.arccos(np.clip(v[2], -1, 1)), np.arctan2(v[1], v[0])]

    rng = np.random.Generator(np.random.PCG64(5))
    starts = list(zip(*np.unravel_index(np.argsort(f, axis=None)[[0, -1]], f.shape)))
    starts += [tuple(ij) for ij in rng.integers(0, len(grid), (80, 2))]
    found = []
    for i, j in starts:
        res = least_squares(resid, angles(grid[i]) + angles(grid[j]), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x, y = _unit_from_angles(*res.x[:2]), _unit_from_angles(*res.x[2:])
        if _reduced_residual(b, x, y) <= 1e-9:
            found.append(float(_reduced(b, x, y)))
    levels = sorted({float(d.level) for d in s3s3_classify_critical(b)})
    assert len(found) >= 20, "dense search reached too few critical points"
    for v in found:
        assert min(abs(v - L) for L in levels) <= 1e-6, f"unclassified critical level {v}"
    # every classified level is reached, and the grid extrema approach the extreme levels
    for L in levels:
        assert min(abs(v - L) for v in found) <= 1e-6, f"classified level {L} never reached"
    assert f.max() <= levels[-1] + 1e-9 and f.min() >= levels[0] - 1e-9
    assert levels[-1] - f.max() <= 0.05 * abs(b).sum() and f.min() - levels[0] <= 0.05 * abs(b).sum()


def test_classification_agrees_with_nu_at_lifts():
    """Evaluate nu at explicit lifts of each classified family (x, y = +-i)."""
    spec = TorusSpec("s3s3", (2, 3, 1), (2, 3, 5))
    lift = {1: ONE, -1: QJ}
    for d in s3s3_classify_critical(spec.b):
        if d.relation.startswith("x=") and ", y=" in d.relation and d.x1 is not None and d.y1 is not None:
            pt = s3s3_point(lift[int(d.x1)], lift[int(d.y1)])
            assert s3s3_nu(spec, pt) == pytest.approx(d.value, abs=1e-12)
            assert np.abs(s3s3_crit_residual(spec, pt)).max() <= 1e-12


# -- gram data and normal forms ---------------------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_gram_bounds(spec, rng):
    S = get_space(spec.space)
    for _ in range(200):
        p = S.random_point(rng)
        g = gram(spec, p)
        assert g.g_UU >= 0 and g.g_VV >= 0
        assert g.h2 - S.nu(spec, p) ** 2 >= -1e-10


@pytest.mark.parametrize("spec,p", [
    (TorusSpec("s6"), np.eye(7)[6]),
    (TorusSpec("flag"), np.eye(3, dtype=complex)),
    (TorusSpec("cp3"), np.eye(4, dtype=complex)),
])
def test_gram_at_fixed_points(spec, p):
    assert tuple(gram(spec, p)) == (0.0, 0.0, 0.0, 0.0)


def test_normal_form_examples():
    pole = np.eye(7)[6]
    np.testing.assert_array_equal(normal_form_zero(TorusSpec("s6"), pole), pole)
    np.testing.assert_allclose(normal_form_zero(TorusSpec("flag"), np.eye(3, dtype=complex)), np.eye(3),
                               atol=1e-15)
    with pytest.raises(ValueError):
        normal_form_zero(TorusSpec("cp3"), cp3_critical_matrices()[0])


def test_s6_normal_form_is_real(rng):
    from nkm.g2 import complex_coords, from_complex, sphere_nu

    for _ in range(20):
        th = rng.uniform(0, 2 * np.pi, 3)
        r = rng.standard_normal(4)
        r /= np.linalg.norm(r)
        # nu = 0 when the phases add up to pi/2
        th[2] = np.pi / 2 - th[0] - th[1]
        z = r[:3] * np.exp(1j * th)
        p = from_complex(*z, r[3])
        assert abs(sphere_nu(p)) <= 1e-12
        q = normal_form_zero(TorusSpec("s6"), p)
        z1, z2, z3, t = complex_coords(q)
        assert abs(z1.imag) + abs(z2.imag) + abs(z3.real) <= 1e-12
        assert abs(sphere_nu(q)) <= 1e-12
        np.testing.assert_allclose(get_space("s6").signature(TorusSpec("s6"), q),
                                   get_space("s6").signature(TorusSpec("s6"), p), atol=1e-12)


def test_flag_and_cp3_normal_forms_on_real_points(rng):
    from scipy.stats import special_ortho_group

    F = get_space("flag")
    for _ in range(10):
        R = special_ortho_group.rvs(3, random_state=int(rng.integers(1 << 30))).astype(complex)
        t = rng.uniform(0, 2 * np.pi, 2)
        p = F.act(TorusSpec("flag"), t, R)
        q = normal_form_zero(TorusSpec("flag"), p)
        assert F.normal_form_residual(q) <= 1e-12
        np.testing.assert_allclose(np.abs(q) ** 2, np.abs(p) ** 2, atol=1e-12)
    P = get_space("cp3")
    from nkm.models import cp3_from_homogeneous
    for _ in range(10):
        z = rng.standard_normal(4)
        p = P.act(TorusSpec("cp3"), rng.uniform(0, 2 * np.pi, 2), cp3_from_homogeneous(z))
        q = normal_form_zero(TorusSpec("cp3"), p)
        assert np.abs(cp3_homogeneous(q).imag).max() <= 1e-12
        assert abs(cp3_nu(q)) <= 1e-12
