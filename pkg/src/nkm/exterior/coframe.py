"""Left-invariant coframes and their Maurer-Cartan differentials.

A :class:`CoframeAlgebra` stores ``de^i`` for every dual basis element; the
differential extends to all forms by linearity and the Leibniz rule.

The printed tables are transcribed term by term in their original (possibly
non-increasing) index order, e.g. ``e^{52}``; sign normalisation happens when
the :class:`KForm` is built.  Entries marked ``derived`` are not printed in the
source tables.  They come from ``de(X, Y) = -e([X, Y])`` applied to the matrix
bases in :mod:`nkm.models.algebras`, and the tests re-derive them there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .forms import EXACT, KForm, wedge

__all__ = [
    "CoframeAlgebra",
    "coframe_d",
    "flag_algebra",
    "sp2_algebra",
    "su2_squared_algebra",
    "ALGEBRAS",
]


@dataclass(frozen=True)
class CoframeAlgebra:
    """Coframe ``e^{base}, ..., e^{base+dim-1}`` with exterior derivative table."""

    name: str
    dim: int
    base: int
    d_table: tuple[KForm, ...]
    derived: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.d_table) != self.dim:
            raise ValueError(f"{self.name}: need {self.dim} differentials, got {len(self.d_table)}")
        for k, f in enumerate(self.d_table):
            if f.dim != self.dim or f.degree != 2:
                raise ValueError(f"{self.name}: de^{k + self.base} is not a 2-form on R^{self.dim}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f"e{k + self.base}" for k in range(self.dim))

    def e(self, *labels, coeff=1) -> KForm:
        return KForm.basis(self.dim, *labels, coeff=coeff, base=self.base)

    def form(self, spec: dict[str, object]) -> KForm:
        return KForm.from_labels(self.dim, spec, base=self.base)

    def de(self, label: int) -> KForm:
        return self.d_table[label - self.base]

    def d(self, w: KForm) -> KForm:
        return coframe_d(w, self)

    def d_squared_residuals(self) -> dict[str, KForm]:
        """``d(de^i)`` for every generator; all vanish iff Jacobi holds."""
        return {lab: self.d(self.d_table[k]) for k, lab in enumerate(self.labels)}


def coframe_d(w: KForm, alg: CoframeAlgebra) -> KForm:
    """Exterior derivative of a constant-coefficient form in the coframe of ``alg``."""
    if w.dim != alg.dim:
        raise ValueError(f"form on R^{w.dim} but algebra {alg.name} has dimension {alg.dim}")
    table = alg.d_table if w.mode == EXACT else tuple(f.to_float() for f in alg.d_table)
    out = KForm.zero(w.dim, w.degree + 1, w.mode, w.base)
    for idx, c in w.items():
        for m, i in enumerate(idx):
            left = KForm(w.dim, m, {idx[:m]: 1}, w.mode, w.base)
            right = KForm(w.dim, len(idx) - m - 1, {idx[m + 1:]: 1}, w.mode, w.base)
            term = wedge(wedge(left, table[i]), right)
            out = out + (term.scale(c) if m % 2 == 0 else term.scale(-c))
    return out


def _table(dim: int, base: int, rows: Sequence[dict[str, int]]) -> tuple[KForm, ...]:
    return tuple(KForm.from_labels(dim, r, base=base) for r in rows)


@lru_cache(maxsize=None)
def flag_algebra() -> CoframeAlgebra:
    """su(3) with basis E_1..E_8; e^1..e^6 span the dual of the isotropy complement."""
    rows = [
        {"46": 1, "35": -1, "27": 1, "28": -1},
        {"36": 1, "45": 1, "17": -1, "18": 1},
        {"15": 1, "26": -1, "47": -2, "48": -1},
        {"52": 1, "61": 1, "37": 2, "38": 1},
        {"24": 1, "13": -1, "67": 1, "68": 2},
        {"23": 1, "14": 1, "57": -1, "58": -2},
        # derived
        {"12": 2, "34": -2},
        {"12": -2, "56": 2},
    ]
    return CoframeAlgebra("flag", 8, 1, _table(8, 1, rows), frozenset({6, 7}))


@lru_cache(maxsize=None)
def sp2_algebra() -> CoframeAlgebra:
    """sp(2) with basis E_0..E_9; e^0..e^5 span the dual of the isotropy complement."""
    rows = [
        {"16": 2, "25": -1, "34": -1},
        {"06": -2, "24": -1, "35": 1},
        {"05": 1, "14": 1, "36": -1, "37": 1, "48": 1, "59": 1},
        {"04": 1, "15": -1, "26": 1, "27": -1, "49": -1, "58": 1},
        {"03": -1, "12": -1, "28": -1, "39": 1, "56": -1, "57": -1},
        {"02": -1, "13": 1, "38": -1, "46": 1, "47": 1, "29": -1},
        # derived
        {"01": 2, "23": -1, "45": -1},
        {"23": 1, "45": -1, "89": -2},
        {"24": 1, "35": 1, "79": 2},
        {"25": 1, "34": -1, "78": -2},
    ]
    return CoframeAlgebra("sp2", 10, 0, _table(10, 0, rows), frozenset({6, 7, 8, 9}))


@lru_cache(maxsize=None)
def su2_squared_algebra() -> CoframeAlgebra:
    """su(2) + su(2) with de^i = 2 e^{jk} for (ijk) cyclic in (123) and (456)."""
    rows = [{"23": 2}, {"31": 2}, {"12": 2}, {"56": 2}, {"64": 2}, {"45": 2}]
    return CoframeAlgebra("su2xsu2", 6, 1, _table(6, 1, rows))


ALGEBRAS = {
    "flag": flag_algebra,
    "cp3": sp2_algebra,
    "s3s3": su2_squared_algebra,
}
