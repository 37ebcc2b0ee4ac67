"""Complex projective three-space as Sp(2)/Sp(1)U(1).

Points are elements of Sp(2) stored in the complex 4x4 block representation
of :mod:`nkm.models.quaternion`.  The first complex column of the block is
``(z^1, z^2, z^3, z^4)``, homogeneous coordinates on which the torus acts with
weights ``(theta, phi, -theta, -phi)``.
"""

from __future__ import annotations

import numpy as np

from .algebras import j0_matrix, sp2_basis, structure_forms
from .base import ModelSpace
from .quaternion import qconj, qmul, quat_block, quat_gram_schmidt, split_block

__all__ = [
    "CP3Space",
    "cp3_components",
    "cp3_nu",
    "cp3_nu_gamma_delta",
    "cp3_crit_residual",
    "cp3_critical_matrices",
    "cp3_from_homogeneous",
    "cp3_homogeneous",
]

CP3_U = quat_block(np.diag([1j, 0]), np.zeros((2, 2)))
CP3_V = quat_block(np.diag([0, 1j]), np.zeros((2, 2)))


def cp3_critical_matrices() -> tuple[np.ndarray, np.ndarray]:
    """The two printed extremal matrices."""
    s = np.sqrt(2)
    P1 = [[0.5, 1 / s], [0.5, -(1 + 1j) / (2 * s)]]
    P2 = [[0.5, 0], [0.5j, (1 - 1j) / (2 * s)]]
    Q1 = [[0.5, 1 / s], [0.5, -(1 - 1j) / (2 * s)]]
    Q2 = [[0.5, 0], [-0.5j, (1 + 1j) / (2 * s)]]
    return quat_block(P1, P2), quat_block(Q1, Q2)


def _quat(a: complex, b: complex) -> np.ndarray:
    """``a + b j`` as a (1, i, j, k) array."""
    return np.array([a.real, a.imag, b.real, b.imag])


def cp3_components(p):
    """``(alpha, beta, gamma, delta)``; alpha, beta as quaternion arrays, gamma, delta complex."""
    P1, P2 = split_block(p)
    c = np.conj

    def row(r):
        A = c(P1[r, 0]) * P1[r, 1] - P2[r, 0] * c(P2[r, 1])
        B = c(P1[r, 0]) * P2[r, 1] + P2[r, 0] * c(P1[r, 1])
        return _quat(1j * A, 1j * B), complex(2j * c(P1[r, 0]) * P2[r, 0])

    alpha, gamma = row(0)
    beta, delta = row(1)
    return alpha, beta, gamma, delta


def cp3_nu(p) -> float:
    """``12 Im(conj(p^1_11) p^2_11 p^1_21 conj(p^2_21))``."""
    P1, P2 = split_block(p)
    return float(12.0 * np.imag(np.conj(P1[0, 0]) * P2[0, 0] * P1[1, 0] * np.conj(P2[1, 0])))


def cp3_nu_gamma_delta(p) -> float:
    _, _, g, d = cp3_components(p)
    return float(3.0 * np.imag(g * np.conj(d)))


def cp3_crit_residual(p) -> np.ndarray:
    """j,k parts of ``alpha conj(beta)`` and ``alpha delta - beta gamma``, and
    1,i parts of ``alpha conj(delta) - beta conj(gamma)``."""
    a, b, g, d = cp3_components(p)
    gq, dq = _quat(g, 0), _quat(d, 0)
    r1 = qmul(a, qconj(b))
    r2 = qmul(a, dq) - qmul(b, gq)
    r3 = qmul(a, qconj(dq)) - qmul(b, qconj(gq))
    return np.concatenate([r1[2:], r2[2:], r3[:2]])


def cp3_homogeneous(p) -> np.ndarray:
    return np.asarray(p)[:, 0].copy()


def cp3_from_homogeneous(z) -> np.ndarray:
    """A point of Sp(2) whose first complex column is ``z / |z|``."""
    z = np.asarray(z, dtype=complex)
    n = np.linalg.norm(z)
    if n < 1e-12:
        raise ValueError("homogeneous coordinates must not all vanish")
    z = z / n
    # complete with the standard vector least aligned with span{z, jhat(z)}
    A = np.zeros((4, 4), dtype=complex)
    A[:, 0] = z
    best, best_res = None, -1.0
    for e in np.eye(4):
        w = np.concatenate([-np.conj(z[2:]), np.conj(z[:2])])
        r = e - z * (z.conj() @ e) - w * (w.conj() @ e)
        if np.linalg.norm(r) > best_res:
            best, best_res = e, np.linalg.norm(r)
    A[:, 1] = best
    return quat_gram_schmidt(A)


class CP3Space(ModelSpace):
    name = "cp3"
    shape = (4, 4)
    complex_points = True

    def __init__(self):
        self._basis = np.array(sp2_basis()[:6])
        self._sigma, self._phi = structure_forms("cp3").frame_tensors()
        self._J = j0_matrix("cp3")

    def random_point(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        return quat_gram_schmidt(A)

    def membership_residual(self, p):
        P1, P2 = split_block(p)
        unit = np.abs(p.conj().T @ p - np.eye(4)).max()
        return float(max(unit, np.abs(p - quat_block(P1, P2)).max()))

    def retract(self, x):
        return quat_gram_schmidt(np.asarray(x, dtype=complex))

    def step(self, p, c, t=1.0):
        X = np.tensordot(np.asarray(c, float), self._basis, axes=1)
        return self.retract(p @ (np.eye(4) + t * X))

    def distance(self, p, q):
        ov = abs(np.vdot(np.asarray(p)[:, 0], np.asarray(q)[:, 0]))
        return float(np.sqrt(max(0.0, 1.0 - ov * ov)))

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
        return np.exp(1j * np.array([th, ph, -th, -ph]))[:, None] * p

    def act_effective(self, spec, s, p):
        """``(e^{2i theta}, e^{i(phi - theta)}) = (e^{i s_1}, e^{i s_2})``."""
        return self.act(spec, (s[0] / 2, s[1] + s[0] / 2), p)

    def generators(self, spec, p):
        self._check_t2(spec)
        a, b, g, d = cp3_components(p)
        s = np.sqrt(2)

        def frame(q, x):
            return np.array([x.imag, x.real, s * q[0], s * q[1], s * q[2], s * q[3]])

        return frame(a, g), frame(b, d)

    def generators_matrix(self, p):
        ph = np.conj(p).T
        return self.frame_coords(ph @ CP3_U @ p), self.frame_coords(ph @ CP3_V @ p)

    def nu(self, spec, p):
        self._check_t2(spec)
        return cp3_nu(p)

    def crit_residual(self, spec, p):
        self._check_t2(spec)
        return cp3_crit_residual(p)

    def normal_form_zero(self, spec, p, tol=1e-9):
        """Representative with real homogeneous coordinates."""
        self._check_t2(spec)
        p = self.check_point(p)
        if abs(cp3_nu(p)) > tol:
            raise ValueError(f"normal form needs nu = 0, got {cp3_nu(p):.3g}")
        z = cp3_homogeneous(p)
        small = 1e-12
        # z1 z3 and z2 z4 are torus invariant; one complex scale makes both real
        s = (z[0] * z[2]) ** 2 + (z[1] * z[3]) ** 2
        lam = np.exp(-1j * np.angle(s) / 4) if abs(s) > small else 1.0
        z = z * lam
        th = -np.angle(z[0]) if abs(z[0]) > small else (np.angle(z[2]) if abs(z[2]) > small else 0.0)
        ph = -np.angle(z[1]) if abs(z[1]) > small else (np.angle(z[3]) if abs(z[3]) > small else 0.0)
        z = np.exp(1j * np.array([th, ph, -th, -ph])) * z
        if np.abs(z.imag).max() > 1e-6:
            raise ValueError(f"no real representative found (residual {np.abs(z.imag).max():.3g})")
        return cp3_from_homogeneous(z.real)

    def signature(self, spec, p):
        z = cp3_homogeneous(p)
        w = z[0] * z[2] * np.conj(z[1] * z[3])
        return np.concatenate([np.abs(z) ** 2, [w.real, w.imag]])
