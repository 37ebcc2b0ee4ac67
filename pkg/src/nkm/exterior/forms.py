"""Sparse alternating forms on a small real vector space.

A :class:`KForm` is a map from strictly increasing index tuples to
coefficients.  Coefficients are either exact (:class:`QuadScalar`) or floats;
the two modes never mix implicitly.  Indices are stored 0-based; ``base`` only
affects how they are printed and parsed, so that forms written as ``e^{136}``
on a 1-based coframe read naturally.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

from .scalars import QuadScalar, _coerce, format_quad, parse_quad

__all__ = [
    "EXACT",
    "FLOAT",
    "KForm",
    "wedge",
    "contract",
    "hodge7",
    "eval_form",
    "dump_form",
    "parse_form",
    "permutation_sign",
]

EXACT = "exact"
FLOAT = "float"
MAX_DIM = 10


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _zero(mode):
    return QuadScalar(0) if mode == EXACT else 0.0


def _scalar(x, mode):
    if mode == EXACT:
        q = _coerce(x)
        if q is None:
            raise TypeError(f"exact form needs an exact coefficient, got {type(x).__name__}")
        return q
    if isinstance(x, QuadScalar):
        raise TypeError("floating form cannot take an exact coefficient")
    return float(x)


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, QuadScalar) else c == 0.0


class KForm:
    """Immutable sparse k-form on R^dim."""

    __slots__ = ("dim", "degree", "mode", "base", "_terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[tuple, object] | None = None,
                 mode: str = EXACT, base: int = 1):
        if not 0 < dim <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown scalar mode {mode!r}")
        acc: dict[tuple, object] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} does not have length {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"index tuple {idx} out of range for dimension {dim}")
            sign = permutation_sign(idx)
            if sign == 0:
                continue
            key = tuple(sorted(idx))
            c = _scalar(coeff, mode)
            acc[key] = acc.get(key, _zero(mode)) + (c if sign > 0 else -c)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_terms",
                           {k: v for k, v in sorted(acc.items()) if not _is_zero(v)})

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, dim, degree, mode=EXACT, base=1) -> "KForm":
        return cls(dim, degree, {}, mode, base)

    @classmethod
    def constant(cls, dim, value=1, mode=EXACT, base=1) -> "KForm":
        return cls(dim, 0, {(): value}, mode, base)

    @classmethod
    def basis(cls, dim, *labels, coeff=1, mode=EXACT, base=1) -> "KForm":
        """The monomial ``coeff * e^{labels}`` with labels in the ``base`` convention."""
        idx = tuple(i - base for i in labels)
        return cls(dim, len(idx), {idx: coeff}, mode, base)

    @classmethod
    def from_labels(cls, dim, spec: Mapping[str, object], mode=EXACT, base=1) -> "KForm":
        """Build from single-digit label strings, e.g. ``{"136": -1, "246": 1}``."""
        if not spec:
            raise ValueError("use KForm.zero for an empty form")
        degrees = {len(k) for k in spec}
        if len(degrees) != 1:
            raise ValueError("mixed degrees in label map")
        terms = {tuple(int(ch) - base for ch in k): v for k, v in spec.items()}
        return cls(dim, degrees.pop(), terms, mode, base)

    # -- access ------------------------------------------------------------
    @property
    def terms(self) -> dict[tuple, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, *labels):
        """Coefficient of ``e^{labels}`` (labels in the ``base`` convention)."""
        idx = [i - self.base for i in labels]
        sign = permutation_sign(idx)
        if sign == 0:
            return _zero(self.mode)
        c = self._terms.get(tuple(sorted(idx)), _zero(self.mode))
        return c if sign > 0 else -c

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def _like(self, terms, degree=None):
        return KForm(self.dim, self.degree if degree is None else degree, terms,
                     self.mode, self.base)

    def _check_compatible(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError(f"expected KForm, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.mode != self.mode:
            raise ValueError(f"scalar mode mismatch: {self.mode} vs {other.mode}")

    # -- linear structure --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        self._check_compatible(other)
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, _zero(self.mode)) + v
        return self._like(acc)

    def __neg__(self):
        return self._like({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "KForm":
        c = _scalar(c, self.mode)
        return self._like({k: c * v for k, v in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, KForm):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other):
        """``a ^ b`` is the wedge product."""
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.dim, self.degree, self.mode, self._terms) == (
            other.dim, other.degree, other.mode, other._terms)

    def __hash__(self):
        return hash((self.dim, self.degree, self.mode, tuple(self._terms.items())))

    # -- conversions -------------------------------------------------------
    def to_float(self) -> "KForm":
        if self.mode == FLOAT:
            return self
        return KForm(self.dim, self.degree, {k: float(v) for k, v in self._terms.items()},
                     FLOAT, self.base)

    def restrict(self, keep: Sequence[int]) -> "KForm":
        """Pull back to the span of the listed 0-based basis vectors, reindexed in order."""
        pos = {i: n for n, i in enumerate(keep)}
        terms = {}
        for k, v in self._terms.items():
            if all(i in pos for i in k):
                terms[tuple(pos[i] for i in k)] = v
        return KForm(len(keep), self.degree, terms, self.mode, self.base)

    def to_tensor(self) -> np.ndarray:
        """Dense fully antisymmetric float array of shape ``(dim,)*degree``."""
        t = np.zeros((self.dim,) * self.degree)
        for idx, c in self._terms.items():
            c = float(c)
            for perm in itertools.permutations(range(self.degree)):
                t[tuple(idx[p] for p in perm)] += permutation_sign(perm) * c
        return t

    def max_abs(self) -> float:
        return max((abs(float(v)) for v in self._terms.values()), default=0.0)

    def label(self, idx: tuple) -> str:
        return "".join(str(i + self.base) for i in idx)

    def __repr__(self):
        if not self._terms:
            return f"KForm(dim={self.dim}, degree={self.degree}, 0)"
        parts = [f"{v}·e{self.label(k)}" for k, v in self._terms.items()]
        return f"KForm(dim={self.dim}, " + " + ".join(parts) + ")"


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product ``a ∧ b``."""
    a._check_compatible(b)
    deg = a.degree + b.degree
    acc: dict[tuple, object] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            idx = ia + ib
            sign = permutation_sign(idx)
            if sign == 0:
                continue
            key = tuple(sorted(idx))
            prod = ca * cb
            acc[key] = acc.get(key, _zero(a.mode)) + (prod if sign > 0 else -prod)
    return KForm(a.dim, deg, acc, a.mode, a.base)


def contract(X: Sequence, w: KForm) -> KForm:
    """Interior product ``X ⌟ w`` (insertion into the first slot)."""
    if w.degree == 0:
        raise ValueError("cannot contract a 0-form")
    if len(X) != w.dim:
        raise ValueError(f"vector of length {len(X)} for a form on R^{w.dim}")
    xs = [_scalar(x, w.mode) for x in X]
    acc: dict[tuple, object] = {}
    for idx, c in w._terms.items():
        for m, i in enumerate(idx):
            if _is_zero(xs[i]):
                continue
            key = idx[:m] + idx[m + 1:]
            val = xs[i] * c
            acc[key] = acc.get(key, _zero(w.mode)) + (val if m % 2 == 0 else -val)
    return KForm(w.dim, w.degree - 1, acc, w.mode, w.base)


def hodge7(w: KForm) -> KForm:
    """Euclidean Hodge star on R^7 with orientation e^{1...7}."""
    if w.dim != 7:
        raise ValueError(f"hodge7 needs a form on R^7, got dimension {w.dim}")
    full = set(range(7))
    acc = {}
    for idx, c in w._terms.items():
        comp = tuple(sorted(full - set(idx)))
        sign = permutation_sign(idx + comp)
        acc[comp] = c if sign > 0 else -c
    return KForm(7, 7 - w.degree, acc, w.mode, w.base)


def _det(rows: list[list]):
    n = len(rows)
    if n == 0:
        return 1
    total = None
    for perm in itertools.permutations(range(n)):
        term = permutation_sign(perm)
        for r in range(n):
            term = term * rows[r][perm[r]]
        total = term if total is None else total + term
    return total


def eval_form(w: KForm, *vectors):
    """Evaluate ``w(X_1, ..., X_k)`` by multilinear antisymmetric expansion."""
    if len(vectors) != w.degree:
        raise ValueError(f"{w.degree}-form evaluated on {len(vectors)} vectors")
    for v in vectors:
        if len(v) != w.dim:
            raise ValueError(f"vector of length {len(v)} for a form on R^{w.dim}")
    if w.mode == FLOAT:
        V = np.asarray(vectors, dtype=float).T
        if w.degree == 0:
            return float(w._terms.get((), 0.0))
        return float(sum(c * np.linalg.det(V[list(idx), :]) for idx, c in w._terms.items()))
    cols = [[_scalar(x, EXACT) for x in v] for v in vectors]
    total = QuadScalar(0)
    for idx, c in w._terms.items():
        minor = [[cols[j][i] for j in range(w.degree)] for i in idx]
        total = total + c * _det(minor)
    return total


# -- text dump --------------------------------------------------------------

def dump_form(w: KForm) -> str:
    """One ``coeff (i,j,k)`` line per term, labels in the ``base`` convention."""
    lines = [f"# dim={w.dim} degree={w.degree} mode={w.mode} base={w.base}"]
    for idx, c in w._terms.items():
        coeff = format_quad(c) if w.mode == EXACT else repr(float(c))
        lines.append(f"{coeff} ({','.join(str(i + w.base) for i in idx)})")
    return "\n".join(lines) + "\n"


def parse_form(text: str) -> KForm:
    """Inverse of :func:`dump_form`."""
    header, *body = [ln for ln in text.splitlines() if ln.strip()]
    if not header.startswith("#"):
        raise ValueError("missing form header")
    meta = dict(tok.split("=", 1) for tok in header[1:].split())
    dim, degree, mode, base = int(meta["dim"]), int(meta["degree"]), meta["mode"], int(meta["base"])
    terms = {}
    for ln in body:
        coeff, _, idx = ln.rpartition(" ")
        labels = idx.strip("()")
        key = tuple(int(t) - base for t in labels.split(",")) if labels else ()
        terms[key] = parse_quad(coeff) if mode == EXACT else float(coeff)
    return KForm(dim, degree, terms, mode, base)


def forms_close(a: KForm, b: KForm, tol: float) -> bool:
    """Float comparison helper for forms of either mode."""
    diff = a.to_float() - b.to_float()
    return diff.max_abs() <= tol
