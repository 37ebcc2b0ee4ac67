"""S^3 x S^3 = SU(2)^3 / SU(2)_diag with subtori of the maximal three-torus.

A point is a ``(2, 4)`` array holding the unit quaternions ``p, q``.  Tangent
vectors are ``(p X, q Y)`` with ``X, Y`` imaginary; the frame ``E_1..E_6``
corresponds to ``(i, j, -k)`` in each factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebras import s3s3_j_matrix, s3s3_metric, structure_forms
from .base import ModelSpace, TorusSpec
from .quaternion import DegenerateError, qconj, qmul

__all__ = [
    "S3S3Space",
    "CriticalDatum",
    "NU_PREFACTOR",
    "s3s3_xy",
    "s3s3_nu",
    "s3s3_nu_vector",
    "s3s3_crit_residual",
    "s3s3_classify_critical",
    "s3s3_point",
]

NU_PREFACTOR = 2.0 / (3.0 * np.sqrt(3.0))
_QI = np.array([0.0, 1.0, 0.0, 0.0])
_FRAME_SIGN = np.array([1.0, 1.0, -1.0])


def s3s3_point(p, q) -> np.ndarray:
    return np.array([np.asarray(p, float), np.asarray(q, float)])


def s3s3_xy(pt) -> tuple[np.ndarray, np.ndarray]:
    """Imaginary parts of ``conj(p) i p`` and ``conj(q) i q``."""
    pt = np.asarray(pt, dtype=float)
    p, q = pt[0], pt[1]
    x = qmul(qconj(p), qmul(_QI, p))[1:]
    y = qmul(qconj(q), qmul(_QI, q))[1:]
    return x, y


def s3s3_nu_vector(pt) -> np.ndarray:
    """The three-torus multi-moment map ``(nu_1, nu_2, nu_3)``."""
    x, y = s3s3_xy(pt)
    return NU_PREFACTOR * np.array([y[0], x[0], x @ y])


def s3s3_nu(spec: TorusSpec, pt) -> float:
    b = spec.b
    return float(b @ s3s3_nu_vector(pt))


def s3s3_crit_residual(spec: TorusSpec, pt) -> np.ndarray:
    """Left-hand sides of the five-equation critical system in ``x, y``."""
    b1, b2, b3 = spec.b
    x, y = s3s3_xy(pt)
    return np.array([
        b3 * (x[2] * y[1] - x[1] * y[2]),
        b3 * (x[0] * y[1] - x[1] * y[0]) - b2 * x[1],
        b3 * (x[0] * y[2] - x[2] * y[0]) - b2 * x[2],
        b3 * (x[1] * y[0] - x[0] * y[1]) - b1 * y[1],
        b3 * (x[2] * y[0] - x[0] * y[2]) - b1 * y[2],
    ])


@dataclass(frozen=True)
class CriticalDatum:
    """One critical family of ``b_1 y^1 + b_2 x^1 + b_3 <x, y>`` on S^2 x S^2.

    ``x1``/``y1`` are ``None`` where the family leaves that coordinate free;
    ``level`` is the value without the common prefactor ``2/(3 sqrt3)``.
    """

    x1: Fraction | None
    y1: Fraction | None
    relation: str
    level: Fraction

    @property
    def value(self) -> float:
        return NU_PREFACTOR * float(self.level)


def s3s3_classify_critical(b) -> list[CriticalDatum]:
    """All critical families of the reduced multi-moment map, sorted by value."""
    b1, b2, b3 = (Fraction(v) for v in b)
    if b1 == b2 == b3 == 0:
        raise ValueError("b must be non-zero")
    out: list[CriticalDatum] = []
    signs = (1, -1)
    if b3 == 0:
        if b1 != 0 and b2 != 0:
            for e1 in signs:
                for e2 in signs:
                    out.append(CriticalDatum(Fraction(e1), Fraction(e2), f"x={e1:+d}i, y={e2:+d}i",
                                             b1 * e2 + b2 * e1))
        elif b1 != 0:
            for e2 in signs:
                out.append(CriticalDatum(None, Fraction(e2), f"y={e2:+d}i, x free", b1 * e2))
        else:
            for e1 in signs:
                out.append(CriticalDatum(Fraction(e1), None, f"x={e1:+d}i, y free", b2 * e1))
    else:
        # x, y = +-i is critical for every b
        for e1 in signs:
            for e2 in signs:
                out.append(CriticalDatum(Fraction(e1), Fraction(e2), f"x={e1:+d}i, y={e2:+d}i",
                                         b1 * e2 + b2 * e1 + b3 * e1 * e2))
        if b1 == 0 and b2 == 0:
            for e in signs:
                out.append(CriticalDatum(None, None, f"y={e:+d}x", b3 * e))
        elif b1 != 0 and b2 != 0:
            # perpendicular parts are parallel, y_perp = kappa x_perp with kappa = -b2/b1
            kappa = -b2 / b1
            x1 = (b1 ** 2 * b3 ** 2 - b1 ** 2 * b2 ** 2 - b2 ** 2 * b3 ** 2) / (2 * b1 * b2 ** 2 * b3)
            y1 = kappa * x1 - b2 / b3
            if abs(x1) < 1 and abs(y1) < 1:
                level = b1 * y1 + b2 * x1 + b3 * (x1 * y1 + kappa * (1 - x1 * x1))
                out.append(CriticalDatum(x1, y1, f"y_perp={kappa}*x_perp", level))
    out.sort(key=lambda d: (d.level, d.relation))
    return out


class S3S3Space(ModelSpace):
    name = "s3s3"
    shape = (2, 4)

    def __init__(self):
        self._G = s3s3_metric()
        self._sigma, self._phi = structure_forms("s3s3").frame_tensors()
        self._J = s3s3_j_matrix()

    def default_spec(self) -> TorusSpec:
        return TorusSpec("s3s3", (1, 0, 0), (0, 1, 0))

    def random_point(self, rng):
        x = rng.standard_normal((2, 4))
        return x / np.linalg.norm(x, axis=1, keepdims=True)

    def membership_residual(self, p):
        return float(np.abs(np.linalg.norm(p, axis=1) - 1.0).max())

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        n = np.linalg.norm(x, axis=1, keepdims=True)
        if n.min() < 1e-6:
            raise DegenerateError("cannot retract a quaternion near zero")
        return x / n

    @staticmethod
    def _imag(c3) -> np.ndarray:
        return np.concatenate([[0.0], np.asarray(c3, float) * _FRAME_SIGN])

    def step(self, p, c, t=1.0):
        c = np.asarray(c, float)
        X, Y = self._imag(c[:3]), self._imag(c[3:])
        return self.retract(np.array([p[0] + t * qmul(p[0], X), p[1] + t * qmul(p[1], Y)]))

    def distance(self, p, q):
        return float(np.linalg.norm(np.asarray(p) - np.asarray(q)))

    def metric(self, p):
        return self._G

    def sigma(self, p):
        return self._sigma

    def phi(self, p):
        return self._phi

    def complex_structure(self, p):
        return self._J

    @staticmethod
    def _angles(spec: TorusSpec, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if spec.kind == "t3":
            return t
        return t[0] * np.array(spec.a1, float) + t[1] * np.array(spec.a2, float)

    def act(self, spec, t, p):
        """``(t_1 p t_3^{-1}, t_2 q t_3^{-1})`` with ``t_k = e^{i theta_k}``."""
        self._check_spec(spec)
        th = self._angles(spec, t)
        u = [np.array([np.cos(a), np.sin(a), 0.0, 0.0]) for a in th]
        u3 = qconj(u[2])
        return np.array([qmul(qmul(u[0], p[0]), u3), qmul(qmul(u[1], p[1]), u3)])

    def unit_generators(self, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Frame coordinates of ``U_1, U_2, U_3``."""
        x, y = s3s3_xy(p)
        U1 = np.concatenate([x * _FRAME_SIGN, np.zeros(3)])
        U2 = np.concatenate([np.zeros(3), y * _FRAME_SIGN])
        U3 = np.array([-1.0, 0, 0, -1.0, 0, 0])
        return U1, U2, U3

    def generators(self, spec, p):
        self._check_spec(spec)
        Us = self.unit_generators(p)
        if spec.kind == "t3":
            return Us
        a1, a2 = np.array(spec.a1, float), np.array(spec.a2, float)
        return sum(a1[k] * Us[k] for k in range(3)), sum(a2[k] * Us[k] for k in range(3))

    def nu(self, spec, p):
        self._check_t2(spec)
        return s3s3_nu(spec, p)

    def crit_residual(self, spec, p):
        self._check_t2(spec)
        return s3s3_crit_residual(spec, p)

    def normal_form_zero(self, spec, p, tol=1e-9):
        """No normal form is singled out here; the point is returned as is."""
        self._check_t2(spec)
        p = self.check_point(p)
        if abs(self.nu(spec, p)) > tol:
            raise ValueError(f"normal form needs nu = 0, got {self.nu(spec, p):.3g}")
        return p.copy()

    def signature(self, spec, p):
        x, y = s3s3_xy(p)
        return np.array([x[0], y[0], x @ y])
