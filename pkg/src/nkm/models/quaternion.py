"""Quaternions and 2x2 quaternionic matrices.

A quaternion ``w + x i + y j + z k`` is written ``a + b j`` with complex
``a = w + x i`` and ``b = y + z i``.  A quaternionic matrix ``P = P1 + P2 j``
is represented by the complex block matrix ``[[P1, P2], [-conj P2, conj P1]]``,
which turns quaternionic products into complex matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "qmul",
    "qconj",
    "qunit",
    "quat_block",
    "split_block",
    "jhat",
    "quat_gram_schmidt",
    "QUNITS",
]


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    @classmethod
    def from_complex_pair(cls, a: complex, b: complex) -> "Quaternion":
        """``a + b j``."""
        return cls(a.real, a.imag, b.real, b.imag)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def complex_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.to_array(), other.to_array()))
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.to_array() * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.to_array() * other)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self):
        return Quaternion.from_array(-self.to_array())

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def inner(self, other: "Quaternion") -> float:
        """Euclidean inner product on R^4."""
        return float(self.to_array() @ other.to_array())


def qmul(a, b) -> np.ndarray:
    """Hamilton product of ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def qconj(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def qunit(angle: float) -> np.ndarray:
    """``e^{i angle}`` as a quaternion array."""
    return np.array([np.cos(angle), np.sin(angle), 0.0, 0.0])


QUNITS = {
    "1": np.array([1.0, 0, 0, 0]),
    "i": np.array([0, 1.0, 0, 0]),
    "j": np.array([0, 0, 1.0, 0]),
    "k": np.array([0, 0, 0, 1.0]),
}


def quat_block(P1, P2) -> np.ndarray:
    """Complex 4x4 representation of the quaternionic 2x2 matrix ``P1 + P2 j``."""
    P1 = np.asarray(P1, dtype=complex)
    P2 = np.asarray(P2, dtype=complex)
    return np.block([[P1, P2], [-P2.conj(), P1.conj()]])


def split_block(M) -> tuple[np.ndarray, np.ndarray]:
    """Recover ``(P1, P2)`` from the block representation."""
    M = np.asarray(M)
    return M[:2, :2].copy(), M[:2, 2:].copy()


def is_quaternionic(M, tol: float = 1e-12) -> bool:
    P1, P2 = split_block(M)
    return bool(np.abs(M - quat_block(P1, P2)).max() <= tol)


def jhat(c) -> np.ndarray:
    """Companion column: if ``c`` is the first complex column of a block, this is the third."""
    c = np.asarray(c, dtype=complex)
    return np.concatenate([-np.conj(c[2:]), np.conj(c[:2])])


def quat_gram_schmidt(A, min_norm: float = 1e-6) -> np.ndarray:
    """Quaternionic Gram-Schmidt on the first two complex columns of ``A``.

    Returns the block matrix ``[c0, c1, jhat(c0), jhat(c1)]`` of an element of Sp(2).
    """
    A = np.asarray(A, dtype=complex)
    c0 = A[:, 0]
    n0 = np.linalg.norm(c0)
    if n0 < min_norm:
        raise DegenerateError("first quaternionic column is nearly zero")
    c0 = c0 / n0
    w0 = jhat(c0)
    c1 = A[:, 1] - c0 * (c0.conj() @ A[:, 1]) - w0 * (w0.conj() @ A[:, 1])
    n1 = np.linalg.norm(c1)
    if n1 < min_norm:
        raise DegenerateError("second quaternionic column is nearly dependent")
    c1 = c1 / n1
    return np.column_stack([c0, c1, w0, jhat(c1)])


class DegenerateError(ValueError):
    """Raised when a retraction meets a nearly singular input."""
