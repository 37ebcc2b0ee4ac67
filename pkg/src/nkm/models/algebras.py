"""Matrix bases of su(3) and sp(2), their structure forms, and bracket oracles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..exterior import SQRT3, CoframeAlgebra, KForm, flag_algebra, sp2_algebra, su2_squared_algebra
from .quaternion import quat_block

__all__ = [
    "StructureForms",
    "structure_forms",
    "flag_basis",
    "sp2_basis",
    "inner_m",
    "frame_coords",
    "derive_d_table",
    "j0_matrix",
    "s3s3_j_matrix",
    "s3s3_metric",
]

I = 1j


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


@lru_cache(maxsize=None)
def flag_basis() -> tuple[np.ndarray, ...]:
    """E_1..E_8 of su(3); the first six span the complement of the torus."""
    return (
        _m([[0, I, 0], [I, 0, 0], [0, 0, 0]]),
        _m([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),
        _m([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
        _m([[0, 0, I], [0, 0, 0], [I, 0, 0]]),
        _m([[0, 0, 0], [0, 0, I], [0, I, 0]]),
        _m([[0, 0, 0], [0, 0, 1], [0, -1, 0]]),
        _m([[I, 0, 0], [0, 0, 0], [0, 0, -I]]),
        _m([[0, 0, 0], [0, I, 0], [0, 0, -I]]),
    )


def _q(entries) -> np.ndarray:
    """Block matrix from a 2x2 table of quaternions given as ``(a, b)`` for ``a + b j``."""
    P1 = [[e[0] for e in row] for row in entries]
    P2 = [[e[1] for e in row] for row in entries]
    return quat_block(P1, P2)


@lru_cache(maxsize=None)
def sp2_basis() -> tuple[np.ndarray, ...]:
    """E_0..E_9 of sp(2); the first six span the complement of sp(1)+u(1)."""
    z = (0, 0)
    one, qi, qj, qk = (1, 0), (I, 0), (0, 1), (0, I)
    s = 1 / np.sqrt(2)

    def sc(u, f):
        return (u[0] * f, u[1] * f)

    return (
        _q([[qk, z], [z, z]]),
        _q([[qj, z], [z, z]]),
        _q([[z, sc(one, s)], [sc(one, -s), z]]),
        _q([[z, sc(qi, s)], [sc(qi, s), z]]),
        _q([[z, sc(qj, s)], [sc(qj, s), z]]),
        _q([[z, sc(qk, s)], [sc(qk, s), z]]),
        _q([[qi, z], [z, z]]),
        _q([[z, z], [z, qi]]),
        _q([[z, z], [z, qj]]),
        _q([[z, z], [z, qk]]),
    )


def inner_m(X, Y) -> float:
    """``(1/2) Re tr(X^H Y)``; orthonormal on each complement of the torus."""
    return 0.5 * float(np.real(np.trace(np.conj(X).T @ Y)))


def frame_coords(X, basis) -> np.ndarray:
    """Orthogonal projection coefficients of ``X`` on the listed basis elements."""
    return np.array([inner_m(E, X) for E in basis])


def derive_d_table(basis) -> np.ndarray:
    """Numerical ``de^k(E_i, E_j) = -e^k([E_i, E_j])`` as an array ``[k, i, j]``."""
    n = len(basis)
    # the torus generators need not be orthogonal, so use dual-basis coordinates
    gram = np.array([[inner_m(A, B) for B in basis] for A in basis])
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            br = basis[i] @ basis[j] - basis[j] @ basis[i]
            out[:, i, j] = -np.linalg.solve(gram, frame_coords(br, basis))
    return out


def j0_matrix(space: str) -> np.ndarray:
    """Matrix of ``J_0 X = (2/sqrt3)(A X A^{-1} + X/2)`` on the first six basis vectors."""
    if space == "flag":
        w = np.exp(2j * np.pi / 3)
        A = np.diag([w, w * w, 1.0])
        basis = flag_basis()[:6]
    elif space == "cp3":
        w = np.exp(2j * np.pi / 3)
        A = quat_block(np.diag([w, 1.0]), np.zeros((2, 2)))
        basis = sp2_basis()[:6]
    else:
        raise ValueError(f"no conjugation-defined J_0 for {space!r}")
    Ainv = np.conj(A).T
    cols = [frame_coords(2 / np.sqrt(3) * (A @ E @ Ainv + 0.5 * E), basis) for E in basis]
    return np.array(cols).T


def s3s3_j_matrix() -> np.ndarray:
    """``J(X, Y) = (X - 2Y, 2X - Y)/sqrt3`` at the identity, in the E_1..E_6 frame."""
    J = np.zeros((6, 6))
    s = 1 / np.sqrt(3)
    J[:3, :3] = s * np.eye(3)
    J[:3, 3:] = -2 * s * np.eye(3)
    J[3:, :3] = 2 * s * np.eye(3)
    J[3:, 3:] = -s * np.eye(3)
    return J


@lru_cache(maxsize=None)
def s3s3_metric() -> np.ndarray:
    """``g = (<X,Y> + <JX,JY>)/6`` in the left-invariant E_1..E_6 frame."""
    J = s3s3_j_matrix()
    G = (np.eye(6) + J.T @ J) / 6.0
    G.setflags(write=False)
    return G


@dataclass(frozen=True)
class StructureForms:
    """``sigma_0, phi_0 = psi_+, psi_0 = psi_-`` on a coframe algebra (exact)."""

    algebra: CoframeAlgebra
    sigma: KForm
    phi: KForm
    psi: KForm

    def residuals(self) -> dict[str, KForm]:
        d = self.algebra.d
        return {
            "d sigma0 - 3 phi0": d(self.sigma) - self.phi.scale(3),
            "d psi0 + 2 sigma0^sigma0": d(self.psi) + (self.sigma ^ self.sigma).scale(2),
        }

    def frame_tensors(self) -> tuple[np.ndarray, np.ndarray]:
        """Float ``(Sigma, Phi)`` restricted to the six complement directions."""
        keep = list(range(6))
        return self.sigma.restrict(keep).to_tensor(), self.phi.restrict(keep).to_tensor()


@lru_cache(maxsize=None)
def structure_forms(space: str) -> StructureForms:
    if space == "flag":
        alg = flag_algebra()
        return StructureForms(
            alg,
            alg.form({"12": 1, "34": 1, "56": 1}),
            alg.form({"136": -1, "246": 1, "235": -1, "145": -1}),
            alg.form({"135": 1, "245": -1, "146": -1, "236": -1}),
        )
    if space == "cp3":
        alg = sp2_algebra()
        return StructureForms(
            alg,
            alg.form({"01": 1, "23": 1, "45": 1}),
            alg.form({"024": 1, "134": -1, "035": -1, "125": -1}),
            alg.form({"025": 1, "135": -1, "034": 1, "124": 1}),
        )
    if space == "s3s3":
        alg = su2_squared_algebra()
        c_sigma = Fraction(2, 9) * SQRT3         # 2/(3 sqrt3)
        c_phi = Fraction(4, 27) * SQRT3          # 4/(9 sqrt3)
        return StructureForms(
            alg,
            alg.form({"14": 1, "25": 1, "36": 1}).scale(c_sigma),
            alg.form({"126": 1, "135": -1, "156": -1, "234": 1, "246": 1, "345": -1}).scale(c_phi),
            alg.form({"123": 2, "456": 2, "135": 1, "156": -1, "234": -1, "126": -1,
                      "246": 1, "345": -1}).scale(Fraction(-4, 27)),
        )
    raise ValueError(f"no coframe algebra for space {space!r}")
