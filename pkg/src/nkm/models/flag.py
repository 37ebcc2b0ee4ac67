"""The flag manifold SU(3)/T^2 with the left action of the diagonal torus.

A point is represented by any ``p`` in SU(3); the flag is ``(C c_1, C c_1 + C c_2)``
for the columns ``c_k`` of ``p``.  Tangent vectors at ``p`` are ``p X`` with
``X`` in the span of ``E_1..E_6``.
"""

from __future__ import annotations

import numpy as np

from .algebras import flag_basis, j0_matrix, structure_forms
from .base import ModelSpace
from .quaternion import DegenerateError

__all__ = [
    "FlagSpace",
    "flag_zw",
    "flag_nu",
    "flag_nu_zw",
    "flag_crit_residual",
    "flag_critical_matrix",
    "FLAG_U",
    "FLAG_V",
    "FLAG_CLAIMED_EXTREMUM",
]

FLAG_U = np.diag([-1j, 2j, -1j])
FLAG_V = np.diag([-1j, -1j, 2j])
# magnitude stated alongside the printed extremal matrix; the formula gives 3 sqrt3 / 2
FLAG_CLAIMED_EXTREMUM = np.sqrt(3) / 2


def flag_critical_matrix(conjugate: bool = False) -> np.ndarray:
    """The printed extremal matrix (or its conjugate, the other extremal orbit)."""
    w = np.exp(2j * np.pi / 3)
    p = np.array([[1j * w, 1j, 1j * w * w], [1, 1, 1], [w * w, 1, w]]) / np.sqrt(3)
    return p.conj() if conjugate else p


def flag_zw(p) -> tuple[complex, ...]:
    """``(z^1, z^2, z^3, w^1, w^2, w^3)``; invariant under the left torus."""
    p = np.asarray(p)
    r2, r3 = p[1], p[2]
    z = (3 * np.conj(r2[0]) * r2[1], 3 * np.conj(r2[0]) * r2[2], 3 * np.conj(r2[1]) * r2[2])
    w = (3 * np.conj(r3[0]) * r3[1], 3 * np.conj(r3[0]) * r3[2], 3 * np.conj(r3[1]) * r3[2])
    return tuple(complex(v) for v in z + w)


def flag_nu(p) -> float:
    """``-27 Im(p22 conj(p23) conj(p32) p33)``."""
    p = np.asarray(p)
    return float(-27.0 * np.imag(p[1, 1] * np.conj(p[1, 2]) * np.conj(p[2, 1]) * p[2, 2]))


def flag_nu_zw(p) -> float:
    """``3 Im(z^3 conj(w^3))``."""
    zw = flag_zw(p)
    return float(3.0 * np.imag(zw[2] * np.conj(zw[5])))


def flag_crit_residual(p) -> np.ndarray:
    """Differences of the three sides of the critical system (complex)."""
    p = np.asarray(p)
    c = np.conj
    return np.array([
        p[1, 1] * c(p[1, 2]) * c(p[2, 0]) * p[2, 2] - c(p[1, 0]) * p[1, 2] * p[2, 1] * c(p[2, 2]),
        c(p[1, 1]) * p[1, 2] * c(p[2, 0]) * p[2, 1] - c(p[1, 0]) * p[1, 1] * c(p[2, 1]) * p[2, 2],
        c(p[1, 0]) * p[1, 2] * p[2, 0] * c(p[2, 1]) - p[1, 0] * c(p[1, 1]) * c(p[2, 0]) * p[2, 2],
    ])


def _frame_from_zw(z1, z2, z3) -> np.ndarray:
    """Frame coordinates of ``(p^-1 U p)_m`` given its three coefficients."""
    return np.array([z1.real, -z1.imag, -z2.imag, z2.real, z3.real, -z3.imag])


def _phase_qr(A) -> np.ndarray:
    Q, R = np.linalg.qr(A)
    d = np.diag(R)
    if np.min(np.abs(d)) < 1e-6:
        raise DegenerateError("flag retraction met a nearly singular matrix")
    Q = Q * (d / np.abs(d))
    Q[:, 2] /= np.linalg.det(Q)
    return Q


class FlagSpace(ModelSpace):
    name = "flag"
    shape = (3, 3)
    complex_points = True

    def __init__(self):
        self._basis = np.array(flag_basis()[:6])
        self._sigma, self._phi = structure_forms("flag").frame_tensors()
        self._J = j0_matrix("flag")

    def random_point(self, rng):
        A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        return _phase_qr(A)

    def membership_residual(self, p):
        return float(max(np.abs(p.conj().T @ p - np.eye(3)).max(), abs(np.linalg.det(p) - 1)))

    def retract(self, x):
        return _phase_qr(np.asarray(x, dtype=complex))

    def step(self, p, c, t=1.0):
        X = np.tensordot(np.asarray(c, float), self._basis, axes=1)
        return self.retract(p @ (np.eye(3) + t * X))

    def distance(self, p, q):
        overlaps = np.abs(np.sum(np.conj(p) * q, axis=0))
        return float(np.sqrt(np.max(np.clip(1.0 - overlaps ** 2, 0.0, None))))

    def metric(self, p):
        return np.eye(6)

    def sigma(self, p):
        return self._sigma

    def phi(self, p):
        return self._phi

    def complex_structure(self, p):
        return self._J

    def frame_coords(self, X) -> np.ndarray:
        return 0.5 * np.real(np.einsum("kij,ij->k", self._basis.conj(), X))

    def act(self, spec, t, p):
        self._check_t2(spec)
        th, ph = t
        return np.exp(1j * np.array([th, ph, -(th + ph)]))[:, None] * p

    def act_effective(self, spec, s, p):
        """``(e^{3i theta}, e^{i(theta - phi)}) = (e^{i s_1}, e^{i s_2})``."""
        return self.act(spec, (s[0] / 3, s[0] / 3 - s[1]), p)

    def generators(self, spec, p):
        self._check_t2(spec)
        z1, z2, z3, w1, w2, w3 = flag_zw(p)
        return _frame_from_zw(z1, z2, z3), _frame_from_zw(w1, w2, w3)

    def generator_angles(self, spec):
        # U and V are the velocities (-1, 2) and (-1, -1) of (theta, phi)
        return np.array([[-1.0, 2.0], [-1.0, -1.0]])

    def generators_matrix(self, p):
        """Projection of ``p^-1 U p`` and ``p^-1 V p`` computed from matrices."""
        ph = np.conj(p).T
        return self.frame_coords(ph @ FLAG_U @ p), self.frame_coords(ph @ FLAG_V @ p)

    def nu(self, spec, p):
        self._check_t2(spec)
        return flag_nu(p)

    def crit_residual(self, spec, p):
        self._check_t2(spec)
        r = flag_crit_residual(p)
        return np.concatenate([r.real, r.imag])

    def normal_form_zero(self, spec, p, tol=1e-9):
        """Use both tori to make the second and third rows real."""
        self._check_t2(spec)
        p = self.check_point(p)
        if abs(flag_nu(p)) > tol:
            raise ValueError(f"normal form needs nu = 0, got {flag_nu(p):.3g}")
        small = 1e-12
        r2 = p[1]
        col = np.where(np.abs(r2) > small, np.exp(-1j * np.angle(r2)), 1.0)
        r3 = p[2] * col
        # columns with a zero in row 2 are free: rotate them to align row 3
        s = np.sum(np.where(np.abs(r2) > small, r3 * r3, 0.0))
        if abs(s) < small:
            s = np.sum(r3 * r3)
        xi = np.angle(s) / 2 if abs(s) > small else 0.0
        for j in range(3):
            if abs(r2[j]) <= small and abs(r3[j]) > small:
                col[j] *= np.exp(1j * (xi - np.angle(r3[j])))
        row2 = p[1] * col
        row3 = p[2] * col * np.exp(-1j * xi)
        left = max(np.abs(row2.imag).max(), np.abs(row3.imag).max())
        if left > 1e-6:
            raise ValueError(f"rows two and three could not be made real (residual {left:.3g})")
        row2, row3 = row2.real, row3.real
        q = np.array([np.conj(np.cross(row2, row3)), row2, row3], dtype=complex)
        return self.retract(q)

    def normal_form_residual(self, p) -> float:
        """Largest imaginary part left in rows two and three."""
        return float(np.abs(np.asarray(p)[1:].imag).max())

    def signature(self, spec, p):
        return (np.abs(p) ** 2).ravel()
