"""Identity checks and the sampled invariant suite shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .critic import FD_STEP, criticality_gap, fd_grad, riemannian_grad
from .exterior import KForm, dump_form
from .g2 import cross, g2_constants, hodge_consistent, n_contract_star_phi, sigma_ambient, \
    sigma_ambient_printed
from .models import TorusSpec, get_space, structure_forms

__all__ = [
    "Check",
    "identity_checks",
    "cross_product_defect",
    "invariant_suite",
    "sample_points",
]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: str
    detail: str = ""

    def line(self) -> str:
        tail = f" ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: residual {self.residual}{tail}"


def _form_check(name: str, r: KForm, exact: bool) -> Check:
    if exact:
        shown = "0 (exact)" if r.is_zero() else dump_form(r).strip().replace("\n", "; ")
    else:
        shown = f"{r.max_abs():.3e}"
    return Check(name, r.is_zero(), shown)


def cross_product_defect(n: int, seed: int = 0) -> float:
    """Largest ``|‖P(X,Y)‖^2 - (‖X‖^2‖Y‖^2 - <X,Y>^2)| / (1 + ‖X‖^2‖Y‖^2)`` over random pairs."""
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.standard_normal((n, 7))
    Y = rng.standard_normal((n, 7))
    worst = 0.0
    for x, y in zip(X, Y):
        lhs = float(np.sum(cross(x, y) ** 2))
        rhs = float((x @ x) * (y @ y) - (x @ y) ** 2)
        worst = max(worst, abs(lhs - rhs) / (1 + (x @ x) * (y @ y)))
    return worst


def identity_checks(space: str, exact: bool = False, samples: int = 1000, seed: int = 0) -> list[Check]:
    """Exact structure equations of ``space`` (plus float J checks where relevant)."""
    out: list[Check] = []
    if space == "s6":
        phi, star_phi = g2_constants()
        out.append(_form_check("d<J.,.> - 3 phi", sigma_ambient().d() - phi.scale(3), exact))
        out.append(_form_check("d(N _| *phi) - 4 *phi", n_contract_star_phi().d() - star_phi.scale(4), exact))
        printed = sigma_ambient_printed()
        same = all(a == b for a, b in zip(printed.parts, sigma_ambient().parts))
        out.append(Check("printed <J.,.> table = N _| phi", same, "0" if same else "differs"))
        ok = hodge_consistent()
        out.append(Check("*phi = Hodge star of phi", ok, "0" if ok else "differs"))
        d = cross_product_defect(samples, seed)
        out.append(Check("|P(X,Y)|^2 = |X|^2|Y|^2 - <X,Y>^2", d < 1e-12, f"{d:.3e}", f"{samples} pairs"))
        return out
    sf = structure_forms(space)
    for k, r in sf.residuals().items():
        out.append(_form_check(k, r, exact))
    sq = sf.algebra.d_squared_residuals()
    bad = [k for k, r in sq.items() if not r.is_zero()]
    worst = max(r.max_abs() for r in sq.values())
    out.append(Check("d^2 e^k = 0", not bad, "0 (exact)" if exact and not bad else f"{worst:.3e}",
                     f"{len(sq)} generators" + (f", failing {bad}" if bad else "")))
    S = get_space(space)
    p = S.random_point(np.random.Generator(np.random.PCG64(seed)))
    J, G = S.complex_structure(p), S.metric(p)
    r = float(np.abs(J @ J + np.eye(6)).max())
    out.append(Check("J^2 = -Id", r < 1e-12, f"{r:.3e}"))
    r = float(np.abs(J.T @ G - S.sigma(p)).max())
    out.append(Check("sigma = g(J., .)", r < 1e-12, f"{r:.3e}"))
    return out


def sample_points(space: str, n: int, seed: int = 0) -> list[np.ndarray]:
    S = get_space(space)
    rng = np.random.Generator(np.random.PCG64(seed))
    return [S.random_point(rng) for _ in range(n)]


def invariant_suite(spec: TorusSpec, n: int = 1000, seed: int = 0, fd_points: int = 100) -> list[Check]:
    """Sampled invariants: torus invariance, gap sign, gradient identity, FD gradient, zero interior."""
    if spec.kind != "t2":
        raise ValueError("the invariant suite needs a two-torus")
    S = get_space(spec.space)
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = [S.random_point(rng) for _ in range(n)]
    angles = rng.uniform(0, 2 * np.pi, size=(n, 2))
    nus = np.array([S.nu(spec, p) for p in pts])
    inv = np.array([abs(S.nu(spec, S.act(spec, t, p)) - v) for t, p, v in zip(angles, pts, nus)])
    gaps, ident = zip(*(criticality_gap(spec, p) for p in pts))
    gaps, ident = np.array(gaps), np.array(ident)
    m = min(fd_points, n)
    rel = []
    for p in pts[:m]:
        g, gf = riemannian_grad(spec, p), fd_grad(spec, p, FD_STEP)
        rel.append(float(np.linalg.norm(g - gf) / max(np.linalg.norm(g), 1e-300)))
    rel = np.array(rel)

    def worst(a, i=None):
        i = int(np.argmax(a)) if i is None else i
        return i, float(a[i])

    out = []
    i, w = worst(inv)
    out.append(Check("torus invariance |nu(t.p) - nu(p)| <= 1e-10", w <= 1e-10, f"{w:.3e}",
                     f"{n} samples, worst #{i}"))
    i = int(np.argmin(gaps))
    out.append(Check("h^2 - nu^2 >= -1e-10", gaps[i] >= -1e-10, f"{gaps[i]:.3e}", f"{n} samples, worst #{i}"))
    i, w = worst(ident)
    out.append(Check("|grad nu|^2 = 9 (h^2 - nu^2) within 1e-8 (1 + 9|gap|)", w <= 1e-8, f"{w:.3e}",
                     f"{n} samples, worst #{i}"))
    i, w = worst(rel)
    out.append(Check("gradient vs central differences, relative < 1e-6", w < 1e-6, f"{w:.3e}",
                     f"{m} samples, worst #{i}"))
    lo, hi = float(nus.min()), float(nus.max())
    out.append(Check("nu takes both signs beyond 1e-3", lo < -1e-3 and hi > 1e-3,
                     f"min {lo:.6f} max {hi:.6f}", f"{n} samples"))
    return out
