"""The G2 three-form on R^7 and the nearly Kähler six-sphere.

Coordinates are ``x^1..x^7`` (stored 0-based).  The torus acts on
``R^7 = C^3 + R`` through ``z^1 = x^1 + i x^6``, ``z^2 = x^5 + i x^2``,
``z^3 = x^4 + i x^3`` and ``t = x^7``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exterior import EXACT, KForm, contract, hodge7, wedge

__all__ = [
    "g2_constants",
    "phi_tensor",
    "cross",
    "sphere_J",
    "sphere_generators",
    "sphere_nu",
    "sphere_crit_residual",
    "complex_coords",
    "from_complex",
    "act_s6",
    "LinearForm",
    "sigma_ambient",
    "sigma_ambient_printed",
    "n_contract_star_phi",
    "hodge_consistent",
    "TANGENCY_TOL",
]

TANGENCY_TOL = 1e-10


@lru_cache(maxsize=None)
def g2_constants() -> tuple[KForm, KForm]:
    """Return ``(phi, *phi)`` in exact mode."""
    phi = KForm.from_labels(7, {
        "123": 1, "145": 1, "167": 1, "246": 1, "257": -1, "347": -1, "356": -1,
    })
    star_phi = KForm.from_labels(7, {
        "4567": 1, "2367": 1, "2345": 1, "1357": 1, "1346": -1, "1256": -1, "1247": -1,
    })
    return phi, star_phi


@lru_cache(maxsize=None)
def phi_tensor() -> np.ndarray:
    t = g2_constants()[0].to_tensor()
    t.setflags(write=False)
    return t


def cross(X: Sequence[float], Y: Sequence[float]) -> np.ndarray:
    """G2 cross product: ``<P(X, Y), Z> = phi(X, Y, Z)``."""
    return np.einsum("ijk,i,j->k", phi_tensor(), np.asarray(X, float), np.asarray(Y, float))


def _unit(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (7,):
        raise ValueError(f"expected a vector in R^7, got shape {p.shape}")
    if abs(np.linalg.norm(p) - 1.0) > 1e-12:
        raise ValueError("point is not on the unit six-sphere")
    return p


def _tangent(p: np.ndarray, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if abs(X @ p) > TANGENCY_TOL * max(1.0, np.linalg.norm(X)):
        raise ValueError("vector is not tangent to the six-sphere at p")
    return X - (X @ p) * p


def sphere_J(p, X) -> np.ndarray:
    """Almost complex structure ``J X = P(N, X)`` at ``p``."""
    p = _unit(p)
    return cross(p, _tangent(p, X))


# -- torus action -------------------------------------------------------------

def complex_coords(p) -> tuple[complex, complex, complex, float]:
    x = np.asarray(p, dtype=float)
    return complex(x[0], x[5]), complex(x[4], x[1]), complex(x[3], x[2]), float(x[6])


def from_complex(z1: complex, z2: complex, z3: complex, t: float) -> np.ndarray:
    return np.array([z1.real, z2.imag, z3.imag, z3.real, z2.real, z1.imag, t])


def act_s6(theta: float, phi: float, p) -> np.ndarray:
    """``A_{theta,phi}`` acting on ``(z^1, z^2, z^3, t)``."""
    z1, z2, z3, t = complex_coords(p)
    return from_complex(np.exp(1j * theta) * z1, np.exp(1j * phi) * z2,
                        np.exp(-1j * (theta + phi)) * z3, t)


def sphere_generators(p) -> tuple[np.ndarray, np.ndarray]:
    """Fundamental vector fields ``U_p, V_p`` of the two circle factors."""
    x = np.asarray(p, dtype=float)
    U = np.zeros(7)
    V = np.zeros(7)
    U[0], U[2], U[3], U[5] = -x[5], -x[3], x[2], x[0]
    V[1], V[2], V[3], V[4] = x[4], -x[3], x[2], -x[1]
    return U, V


def sphere_nu(p) -> float:
    """Multi-moment map ``3 Re(z^1 z^2 z^3)``."""
    x = np.asarray(p, dtype=float)
    x1, x2, x3, x4, x5, x6 = x[:6]
    return 3.0 * (x1 * (x4 * x5 - x2 * x3) - x6 * (x3 * x5 + x2 * x4))


def sphere_crit_residual(p) -> np.ndarray:
    """Tangential part of ``P(U_p, V_p)``; zero exactly at critical points."""
    p = np.asarray(p, dtype=float)
    U, V = sphere_generators(p)
    w = cross(U, V)
    return w - (w @ p) * p


# -- forms with linear coefficients ----------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    """The form ``sum_k x^k * parts[k]`` whose coefficients are linear in position."""

    parts: tuple[KForm, ...]

    def __post_init__(self):
        dims = {f.dim for f in self.parts}
        degs = {f.degree for f in self.parts}
        if len(self.parts) == 0 or len(dims) != 1 or len(degs) != 1:
            raise ValueError("parts must share dimension and degree")
        if self.parts[0].dim != len(self.parts):
            raise ValueError("need one part per coordinate")

    @property
    def dim(self) -> int:
        return len(self.parts)

    def d(self) -> KForm:
        """Exterior derivative ``sum_k dx^k ∧ parts[k]`` (constant coefficients)."""
        out = None
        for k, f in enumerate(self.parts):
            term = wedge(KForm.basis(self.dim, k + 1, mode=f.mode), f)
            out = term if out is None else out + term
        return out

    def at(self, x: Sequence[float]) -> KForm:
        """Evaluate the coefficients at a point (float mode)."""
        out = None
        for xk, f in zip(x, self.parts):
            term = f.to_float().scale(float(xk))
            out = term if out is None else out + term
        return out

    @classmethod
    def from_table(cls, dim: int, degree: int,
                   table: Sequence[tuple[int, int, str]]) -> "LinearForm":
        """Build from ``(coordinate label, sign, form label)`` rows."""
        buckets: dict[int, dict[str, int]] = {}
        for coord, sign, lab in table:
            bucket = buckets.setdefault(coord, {})
            bucket[lab] = bucket.get(lab, 0) + sign
        parts = tuple(
            KForm.from_labels(dim, buckets[k]) if k in buckets else KForm.zero(dim, degree)
            for k in range(1, dim + 1)
        )
        return cls(parts)


def _radial(form: KForm) -> LinearForm:
    """``N ⌟ form`` with ``N = sum_k x^k d/dx^k``, as a form with linear coefficients."""
    parts = []
    for k in range(form.dim):
        e = [0] * form.dim
        e[k] = 1
        parts.append(contract(e, form))
    return LinearForm(tuple(parts))


def sigma_ambient() -> LinearForm:
    """``<J., .>`` on R^7 computed as ``N ⌟ phi``."""
    return _radial(g2_constants()[0])


def n_contract_star_phi() -> LinearForm:
    """``N ⌟ *phi`` on R^7."""
    return _radial(g2_constants()[1])


# transcription of the printed 21-term two-form, rows are (x^k, sign, dx label)
_SIGMA_PRINTED = [
    (3, 1, "12"), (2, -1, "13"), (5, 1, "14"), (4, -1, "15"), (7, 1, "16"), (6, -1, "17"),
    (1, 1, "23"), (6, 1, "24"), (7, -1, "25"), (4, -1, "26"), (5, 1, "27"), (7, -1, "34"),
    (6, -1, "35"), (5, 1, "36"), (4, 1, "37"), (1, 1, "45"), (2, 1, "46"), (3, -1, "47"),
    (3, -1, "56"), (2, -1, "57"), (1, 1, "67"),
]


def sigma_ambient_printed() -> LinearForm:
    return LinearForm.from_table(7, 2, _SIGMA_PRINTED)


def hodge_consistent() -> bool:
    phi, star_phi = g2_constants()
    return hodge7(phi) == star_phi
