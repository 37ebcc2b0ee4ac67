"""Gradients, multistart search, second-order and dependence classification."""

import numpy as np
import pytest

from nkm.critic import (
    CriticalRecord,
    SearchConfig,
    criticality_gap,
    dependence_type,
    fd_grad,
    find_extrema,
    flag_extremum_audit,
    format_record,
    grad_norm,
    orbit_distance,
    riemannian_grad,
    sample_values,
    second_order_classify,
    zero_level_sample,
)
from nkm.g2 import act_s6, complex_coords, from_complex, sphere_crit_residual
from nkm.models import (
    NU_PREFACTOR,
    TorusSpec,
    cp3_homogeneous,
    flag_critical_matrix,
    get_space,
    s3s3_point,
)
from nkm.models.quaternion import QUNITS

SPECS = [
    TorusSpec("s6"),
    TorusSpec("flag"),
    TorusSpec("cp3"),
    TorusSpec("s3s3", (2, 3, 1), (2, 3, 5)),
    TorusSpec("s3s3", (1, -1, 0), (1, 1, -1)),
]
IDS = [s.label() for s in SPECS]
S6 = TorusSpec("s6")
LAMBDA = 1 / np.sqrt(3)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(31))


def s6_extremal_point(sign=1):
    """x^3 = x^5 = x^6 = -sign/sqrt3, where nu = sign/sqrt3."""
    p = np.zeros(7)
    p[[2, 4, 5]] = -sign * LAMBDA
    return p


# -- gradients ------------------------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_gradient_matches_finite_differences(spec, rng):
    S = get_space(spec.space)
    for _ in range(30):
        p = S.random_point(rng)
        g, gf = riemannian_grad(spec, p), fd_grad(spec, p)
        assert np.linalg.norm(g - gf) <= 1e-6 * np.linalg.norm(g)


def test_s6_gradient_is_three_times_the_residual(rng):
    S = get_space("s6")
    from nkm.models import tangent_frame

    for _ in range(20):
        p = S.random_point(rng)
        ambient = tangent_frame(p) @ riemannian_grad(S6, p)
        np.testing.assert_allclose(ambient, 3 * sphere_crit_residual(p), atol=1e-12)


@pytest.mark.parametrize("spec,p", [
    (S6, np.eye(7)[6]),
    (TorusSpec("flag"), np.eye(3, dtype=complex)),
    (TorusSpec("cp3"), np.eye(4, dtype=complex)),
])
def test_gradient_and_gap_vanish_at_fixed_points(spec, p):
    assert not riemannian_grad(spec, p).any()
    assert criticality_gap(spec, p) == (0.0, 0.0)


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_gap_and_identity(spec, rng):
    S = get_space(spec.space)
    for _ in range(100):
        gap, ident = criticality_gap(spec, S.random_point(rng))
        assert gap >= -1e-10
        assert ident <= 1e-8


def test_gap_closes_at_s6_maximizer():
    assert get_space("s6").nu(S6, s6_extremal_point()) == pytest.approx(LAMBDA, abs=1e-15)
    gap, ident = criticality_gap(S6, s6_extremal_point())
    assert abs(gap) <= 1e-10 and ident <= 1e-10
    assert grad_norm(S6, s6_extremal_point()) <= 1e-12


# -- configuration ---------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    {"n_starts": 0},
    {"shrink": 1.0},
    {"shrink": 0.0},
    {"grad_tol": 0.0},
    {"cluster_tol": -1.0},
    {"max_iter": 0},
    {"modes": ("sideways",)},
    {"modes": ()},
])
def test_search_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_find_extrema_needs_two_torus():
    with pytest.raises(ValueError):
        find_extrema(TorusSpec("s3s3", kind="t3"), SearchConfig(n_starts=1))


# -- search ---------------------------------------------------------------------

def _summary(result):
    return [(round(r.value, 9), r.second_order, r.dependence, r.count) for r in result.records]


def test_search_is_deterministic_and_thread_independent():
    spec = TorusSpec("cp3")
    cfg = SearchConfig(n_starts=8, seed=11)
    a = find_extrema(spec, cfg, threads=1)
    b = find_extrema(spec, cfg, threads=4)
    c = find_extrema(spec, cfg, threads=1)
    assert _summary(a) == _summary(b) == _summary(c)
    assert [format_record(r) for r in a] == [format_record(r) for r in b]
    assert (a.runs, a.dropped) == (b.runs, b.dropped)


def test_s6_search_values_and_records():
    res = find_extrema(S6, SearchConfig(n_starts=16, seed=1))
    vals = res.values()
    assert min(vals) == pytest.approx(-LAMBDA, abs=1e-8)
    assert max(vals) == pytest.approx(LAMBDA, abs=1e-8)
    for r in res.records:
        assert r.grad_norm <= 1e-9
        assert r.gap <= 1e-8 * (1 + r.h2)
    top = max(res.records, key=lambda r: r.value)
    assert top.second_order == "max" and top.dependence == "complex"
    bottom = min(res.records, key=lambda r: r.value)
    assert bottom.second_order == "min"


def test_s6_maximizer_coordinates_after_torus_motion():
    res = find_extrema(S6, SearchConfig(n_starts=16, seed=3))
    for r in res.records:
        if abs(abs(r.value) - LAMBDA) > 1e-8:
            continue
        z1, z2, _, _ = complex_coords(r.point)
        # make z^1 purely imaginary and z^2 real
        q = act_s6(np.pi / 2 - np.angle(z1), -np.angle(z2), r.point)
        np.testing.assert_allclose(q[[2, 4, 5]] ** 2, [1 / 3] * 3, atol=1e-6)
        np.testing.assert_allclose(q[[0, 1, 3, 6]], 0, atol=1e-6)


@pytest.mark.parametrize("b_spec,levels", [
    (TorusSpec("s3s3", (2, 3, 1), (2, 3, 5)), [-20, -4, 4, 20]),
    (TorusSpec("s3s3", (1, 0, 0), (0, 1, 0)), [-1, 1]),
])
def test_s3s3_search_values(b_spec, levels):
    res = find_extrema(b_spec, SearchConfig(n_starts=24, seed=0))
    vals = np.array(res.values())
    for L in levels:
        assert np.min(np.abs(vals - NU_PREFACTOR * L)) <= 1e-6


def test_flag_audit_reports_factor_three():
    res = find_extrema(TorusSpec("flag"), SearchConfig(n_starts=24, seed=0))
    audit = flag_extremum_audit(res)
    assert audit.formula_value == pytest.approx(-3 * np.sqrt(3) / 2, abs=1e-12)
    assert audit.located_value == pytest.approx(audit.formula_value, abs=1e-8)
    assert audit.alignment_distance <= 1e-6
    assert audit.ratio == pytest.approx(3.0, abs=1e-8)
    assert len(audit.lines()) == 4


def test_orbit_distance_recovers_torus_motion(rng):
    spec = TorusSpec("flag")
    F = get_space("flag")
    p = flag_critical_matrix()
    q = F.act(spec, (0.7, -1.9), p)
    d, _ = orbit_distance(spec, q, p)
    assert d <= 1e-7


# -- second order ------------------------------------------------------------------

def test_second_order_s6_extrema():
    assert second_order_classify(S6, s6_extremal_point(1)) == "max"
    assert second_order_classify(S6, s6_extremal_point(-1)) == "min"


def test_second_order_saddle_b_12_m8_0():
    spec = TorusSpec("s3s3", (2, 3, 1), (2, 3, 5))
    assert tuple(spec.b) == (12, -8, 0)
    one = QUNITS["1"]
    assert second_order_classify(spec, s3s3_point(one, one)) == "saddle"


def test_second_order_max_on_diagonal_b_001(rng):
    spec = TorusSpec("s3s3", (1, 0, 0), (0, 1, 0))
    assert tuple(spec.b) == (0, 0, 1)
    S = get_space("s3s3")
    q = S.random_point(rng)[0]
    p = s3s3_point(q, q)
    assert S.nu(spec, p) == pytest.approx(NU_PREFACTOR, abs=1e-14)
    assert second_order_classify(spec, p) == "max"
    assert second_order_classify(spec, s3s3_point(QUNITS["1"], QUNITS["1"])) == "max"


def test_second_order_needs_twelve_directions():
    with pytest.raises(ValueError):
        second_order_classify(S6, s6_extremal_point(), n_dirs=6)


# -- dependence --------------------------------------------------------------------

def test_dependence_examples(rng):
    assert dependence_type(S6, from_complex(0.6, 0, 0, 0.8)) == "real"
    assert dependence_type(S6, s6_extremal_point()) == "complex"
    S = get_space("s6")
    assert dependence_type(S6, S.random_point(rng)) == "independent"


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_dependence_consistent_with_criticality(spec, rng):
    S = get_space(spec.space)
    for _ in range(30):
        p = S.random_point(rng)
        assert dependence_type(spec, p) == "independent"
        assert grad_norm(spec, p) > 1e-6


# -- zero level ----------------------------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_values_take_both_signs(spec):
    v = sample_values(spec, 1000, seed=0)
    assert v.min() < -1e-3 and v.max() > 1e-3


def test_zero_level_normal_forms():
    for p in zero_level_sample(S6, 10, seed=1):
        z1, z2, z3, _ = complex_coords(p)
        assert abs(z1.imag) + abs(z2.imag) + abs(z3.real) <= 1e-12
        assert abs(get_space("s6").nu(S6, p)) <= 1e-9
    F = get_space("flag")
    for p in zero_level_sample(TorusSpec("flag"), 10, seed=1):
        assert F.normal_form_residual(p) <= 1e-9
        assert abs(F.nu(TorusSpec("flag"), p)) <= 1e-9
    P = get_space("cp3")
    for p in zero_level_sample(TorusSpec("cp3"), 10, seed=1):
        assert np.abs(cp3_homogeneous(p).imag).max() <= 1e-9
        assert abs(P.nu(TorusSpec("cp3"), p)) <= 1e-9


def test_zero_level_gives_up_after_bounded_tries():
    with pytest.raises(RuntimeError):
        zero_level_sample(S6, 5, seed=0, max_tries=1)


def test_format_record_is_one_line():
    res = find_extrema(TorusSpec("cp3"), SearchConfig(n_starts=4, seed=2))
    for r in res.records:
        assert isinstance(r, CriticalRecord)
        line = format_record(r)
        assert "\n" not in line and line.startswith("cp3 b=- value=")
