"""The six-sphere as a frame-level model space."""

from __future__ import annotations

import numpy as np

from ..g2 import act_s6, complex_coords, cross, from_complex, phi_tensor, sphere_crit_residual, \
    sphere_generators, sphere_nu
from .base import ModelSpace, TorusSpec

__all__ = ["S6Space", "tangent_frame"]


def tangent_frame(p) -> np.ndarray:
    """Orthonormal basis of ``p^perp`` as the columns of a 7x6 matrix (Householder)."""
    p = np.asarray(p, dtype=float)
    s = 1.0 if p[6] >= 0 else -1.0
    v = p.copy()
    v[6] += s
    H = np.eye(7) - 2.0 * np.outer(v, v) / (v @ v)
    return H[:, :6]


class S6Space(ModelSpace):
    name = "s6"
    shape = (7,)

    def random_point(self, rng):
        x = rng.standard_normal(7)
        return x / np.linalg.norm(x)

    def membership_residual(self, p):
        return abs(float(np.linalg.norm(p)) - 1.0)

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        n = np.linalg.norm(x)
        if n < 1e-6:
            from .quaternion import DegenerateError
            raise DegenerateError("cannot retract a vector near the origin to the sphere")
        return x / n

    def step(self, p, c, t=1.0):
        return self.retract(p + t * (tangent_frame(p) @ np.asarray(c, float)))

    def distance(self, p, q):
        return float(np.linalg.norm(np.asarray(p) - np.asarray(q)))

    def metric(self, p):
        return np.eye(6)

    def sigma(self, p):
        B = tangent_frame(p)
        return np.einsum("abc,a,bi,cj->ij", phi_tensor(), p, B, B)

    def phi(self, p):
        B = tangent_frame(p)
        return np.einsum("abc,ai,bj,ck->ijk", phi_tensor(), B, B, B)

    def complex_structure(self, p):
        B = tangent_frame(p)
        return B.T @ np.column_stack([cross(p, B[:, j]) for j in range(6)])

    def act(self, spec, t, p):
        self._check_t2(spec)
        return act_s6(t[0], t[1], p)

    def ambient_generators(self, p):
        return sphere_generators(p)

    def generators(self, spec, p):
        self._check_t2(spec)
        B = tangent_frame(p)
        U, V = sphere_generators(p)
        return B.T @ U, B.T @ V

    def nu(self, spec, p):
        self._check_t2(spec)
        return float(sphere_nu(p))

    def dnu(self, spec, p):
        self._check_t2(spec)
        U, V = sphere_generators(p)
        return 3.0 * tangent_frame(p).T @ cross(U, V)

    def crit_residual(self, spec, p):
        self._check_t2(spec)
        return sphere_crit_residual(p)

    def normal_form_zero(self, spec, p, tol=1e-9):
        """Rotate so that ``z^1, z^2`` are real and ``z^3`` is purely imaginary."""
        self._check_t2(spec)
        p = self.check_point(p)
        if abs(self.nu(spec, p)) > tol:
            raise ValueError(f"normal form needs nu = 0, got {self.nu(spec, p):.3g}")
        z1, z2, z3, _ = complex_coords(p)
        small = 1e-12
        if abs(z1) > small:
            th = -np.angle(z1)
            ph = -np.angle(z2) if abs(z2) > small else np.angle(z3) - np.pi / 2 - th
        elif abs(z2) > small:
            ph = -np.angle(z2)
            th = np.angle(z3) - np.pi / 2 - ph if abs(z3) > small else 0.0
        else:
            ph = 0.0
            th = np.angle(z3) - np.pi / 2 if abs(z3) > small else 0.0
        q = act_s6(th, ph, p)
        w1, w2, w3, t = complex_coords(q)
        # drop the rounding residue in the components that must vanish
        return self.retract(from_complex(complex(w1.real, 0.0), complex(w2.real, 0.0),
                                         complex(0.0, w3.imag), t))

    def signature(self, spec, p):
        z1, z2, z3, t = complex_coords(p)
        w = z1 * z2 * z3
        return np.array([abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2, t, w.real, w.imag])
