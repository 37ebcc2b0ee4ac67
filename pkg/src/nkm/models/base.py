"""Common interface of the four model spaces.

Every space exposes a six-dimensional tangent frame at each point.  The
nearly Kähler data are then three arrays in frame coordinates: the metric
``G``, the two-form ``Sigma`` and the three-form ``Phi`` (which is psi_+).
With generator coordinates ``u, v`` one has ``nu = u^T Sigma v`` and
``d nu = 3 Phi(u, v, .)``, so the gradient is ``G^{-1} (3 Phi(u, v, .))``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "SPACES",
    "TorusSpec",
    "GramData",
    "ModelPoint",
    "ModelSpace",
    "POINT_TOL",
]

SPACES = ("s6", "flag", "cp3", "s3s3")
POINT_TOL = 1e-10


@dataclass(frozen=True)
class TorusSpec:
    """The acting torus.

    ``kind`` is ``"t2"`` for a two-torus and ``"t3"`` for the maximal torus of
    SU(2)^3 acting on S^3 x S^3.  Weight rows ``a1, a2`` are only used for
    ``s3s3`` two-tori.
    """

    space: str
    a1: tuple[int, int, int] | None = None
    a2: tuple[int, int, int] | None = None
    kind: str = "t2"

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}; expected one of {SPACES}")
        if self.kind not in ("t2", "t3"):
            raise ValueError(f"unknown torus kind {self.kind!r}")
        if self.kind == "t3":
            if self.space != "s3s3":
                raise ValueError("a three-torus only acts on s3s3")
            return
        if self.space == "s3s3":
            if self.a1 is None or self.a2 is None:
                raise ValueError("s3s3 two-torus needs weight rows a1 and a2")
            object.__setattr__(self, "a1", tuple(int(v) for v in self.a1))
            object.__setattr__(self, "a2", tuple(int(v) for v in self.a2))
            if len(self.a1) != 3 or len(self.a2) != 3:
                raise ValueError("weight rows must have three entries")
            if not np.any(self.b):
                raise ValueError(f"weights {self.a1}, {self.a2} are linearly dependent (b = 0)")
        elif self.a1 is not None or self.a2 is not None:
            raise ValueError(f"{self.space} uses its standard torus; weights are not accepted")

    @property
    def b(self) -> np.ndarray:
        if self.a1 is None:
            raise ValueError("b is only defined for s3s3 two-tori")
        return np.cross(np.array(self.a1), np.array(self.a2))

    @property
    def rank(self) -> int:
        return 3 if self.kind == "t3" else 2

    def label(self) -> str:
        if self.kind == "t3":
            return f"{self.space} t3"
        if self.a1 is not None:
            return f"{self.space} a1={','.join(map(str, self.a1))} a2={','.join(map(str, self.a2))}"
        return self.space


class GramData(NamedTuple):
    g_UU: float
    g_UV: float
    g_VV: float
    h2: float


class ModelPoint(NamedTuple):
    """A point tagged with its space; ``data`` is the space's array representation."""

    space: str
    data: np.ndarray

    def flat(self) -> np.ndarray:
        return flatten_point(self.data)


def flatten_point(data) -> np.ndarray:
    """Row-major doubles; complex entries are written as (re, im) pairs."""
    a = np.asarray(data)
    if np.iscomplexobj(a):
        return np.column_stack([a.real.ravel(), a.imag.ravel()]).ravel()
    return a.astype(float).ravel()


class ModelSpace(ABC):
    """Frame-level description of one homogeneous nearly Kähler space."""

    name: str
    shape: tuple[int, ...]
    complex_points: bool = False

    # -- points --------------------------------------------------------------

    @abstractmethod
    def random_point(self, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def membership_residual(self, p) -> float: ...

    def check_point(self, p, tol: float = POINT_TOL) -> np.ndarray:
        p = np.asarray(p, dtype=complex if self.complex_points else float)
        if p.shape != self.shape:
            raise ValueError(f"{self.name}: expected point of shape {self.shape}, got {p.shape}")
        r = self.membership_residual(p)
        if not r <= tol:
            raise ValueError(f"{self.name}: point is off the model set (residual {r:.3g})")
        return p

    @abstractmethod
    def retract(self, x) -> np.ndarray: ...

    @abstractmethod
    def step(self, p, c, t: float = 1.0) -> np.ndarray:
        """Move from ``p`` along the frame vector ``c`` for time ``t`` and retract."""

    @abstractmethod
    def distance(self, p, q) -> float:
        """Distance between the represented points (not their representatives)."""

    def to_flat(self, p) -> np.ndarray:
        return flatten_point(p)

    def from_flat(self, values: Sequence[float]) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        if self.complex_points:
            if v.size != 2 * int(np.prod(self.shape)):
                raise ValueError(f"{self.name}: wrong number of values ({v.size})")
            z = v[0::2] + 1j * v[1::2]
            return self.check_point(z.reshape(self.shape), tol=1e-8)
        if v.size != int(np.prod(self.shape)):
            raise ValueError(f"{self.name}: wrong number of values ({v.size})")
        return self.check_point(v.reshape(self.shape), tol=1e-8)

    # -- frame data ----------------------------------------------------------

    @abstractmethod
    def metric(self, p) -> np.ndarray: ...

    @abstractmethod
    def sigma(self, p) -> np.ndarray: ...

    @abstractmethod
    def phi(self, p) -> np.ndarray: ...

    @abstractmethod
    def complex_structure(self, p) -> np.ndarray:
        """Matrix of J in frame coordinates (``Sigma = J^T G``)."""

    # -- torus ---------------------------------------------------------------

    def default_spec(self) -> TorusSpec:
        return TorusSpec(self.name)

    @abstractmethod
    def act(self, spec: TorusSpec, t, p) -> np.ndarray:
        """Action of the torus element with angles ``t``."""

    def act_effective(self, spec: TorusSpec, s, p) -> np.ndarray:
        """Action in angles for which the torus acts effectively (where known)."""
        return self.act(spec, s, p)

    @abstractmethod
    def generators(self, spec: TorusSpec, p) -> tuple[np.ndarray, ...]:
        """Frame coordinates of the fundamental vector fields used for nu."""

    def generator_angles(self, spec: TorusSpec) -> np.ndarray:
        """Row ``k``: the angle velocity of :meth:`act` generating the ``k``-th generator."""
        return np.eye(spec.rank)

    @abstractmethod
    def nu(self, spec: TorusSpec, p) -> float:
        """Closed-form multi-moment map."""

    @abstractmethod
    def crit_residual(self, spec: TorusSpec, p) -> np.ndarray: ...

    @abstractmethod
    def normal_form_zero(self, spec: TorusSpec, p, tol: float = 1e-9) -> np.ndarray: ...

    @abstractmethod
    def signature(self, spec: TorusSpec, p) -> np.ndarray:
        """Torus-invariant coordinates used to compare orbits."""

    # -- derived quantities -------------------------------------------------

    def nu_frame(self, spec: TorusSpec, p) -> float:
        u, v = self.generators(spec, p)[:2]
        return float(u @ self.sigma(p) @ v)

    def dnu(self, spec: TorusSpec, p) -> np.ndarray:
        """Frame components of ``d nu = 3 psi_+(U, V, .)``."""
        u, v = self.generators(spec, p)[:2]
        return 3.0 * np.einsum("ijk,i,j->k", self.phi(p), u, v)

    def gram(self, spec: TorusSpec, p) -> GramData:
        u, v = self.generators(spec, p)[:2]
        G = self.metric(p)
        guu, guv, gvv = float(u @ G @ u), float(u @ G @ v), float(v @ G @ v)
        return GramData(guu, guv, gvv, guu * gvv - guv * guv)

    def _check_spec(self, spec: TorusSpec) -> None:
        if spec.space != self.name:
            raise ValueError(f"torus spec for {spec.space!r} used on {self.name!r}")

    def _check_t2(self, spec: TorusSpec) -> None:
        self._check_spec(spec)
        if spec.kind != "t2":
            raise ValueError(f"{self.name}: operation needs a two-torus")
