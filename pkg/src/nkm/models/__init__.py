"""Model spaces: points, torus actions, generators and multi-moment maps."""

from .algebras import (
    StructureForms,
    derive_d_table,
    flag_basis,
    frame_coords,
    inner_m,
    j0_matrix,
    s3s3_j_matrix,
    s3s3_metric,
    sp2_basis,
    structure_forms,
)
from .base import POINT_TOL, SPACES, GramData, ModelPoint, ModelSpace, TorusSpec, flatten_point
from .cp3 import (
    CP3Space,
    cp3_components,
    cp3_crit_residual,
    cp3_critical_matrices,
    cp3_from_homogeneous,
    cp3_homogeneous,
    cp3_nu,
    cp3_nu_gamma_delta,
)
from .flag import (
    FLAG_CLAIMED_EXTREMUM,
    FLAG_U,
    FLAG_V,
    FlagSpace,
    flag_crit_residual,
    flag_critical_matrix,
    flag_nu,
    flag_nu_zw,
    flag_zw,
)
from .quaternion import (
    DegenerateError,
    Quaternion,
    jhat,
    qconj,
    qmul,
    quat_block,
    quat_gram_schmidt,
    qunit,
    split_block,
)
from .s3s3 import (
    NU_PREFACTOR,
    CriticalDatum,
    S3S3Space,
    s3s3_classify_critical,
    s3s3_crit_residual,
    s3s3_nu,
    s3s3_nu_vector,
    s3s3_point,
    s3s3_xy,
)
from .s6 import S6Space, tangent_frame

_SPACE_CLASSES = {"s6": S6Space, "flag": FlagSpace, "cp3": CP3Space, "s3s3": S3S3Space}
_CACHE: dict[str, ModelSpace] = {}


def get_space(name: str) -> ModelSpace:
    """Shared (stateless) instance of the named model space."""
    if name not in _SPACE_CLASSES:
        raise ValueError(f"unknown space {name!r}; expected one of {SPACES}")
    if name not in _CACHE:
        _CACHE[name] = _SPACE_CLASSES[name]()
    return _CACHE[name]


def act(spec: TorusSpec, t, p):
    return get_space(spec.space).act(spec, t, p)


def generators(spec: TorusSpec, p):
    return get_space(spec.space).generators(spec, p)


def gram(spec: TorusSpec, p) -> GramData:
    return get_space(spec.space).gram(spec, p)


def retract(space: str, x):
    return get_space(space).retract(x)


def normal_form_zero(spec: TorusSpec, p, tol: float = 1e-9):
    return get_space(spec.space).normal_form_zero(spec, p, tol)


def multi_moment(spec: TorusSpec, p) -> float:
    return get_space(spec.space).nu(spec, p)


__all__ = [
    "CP3Space",
    "CriticalDatum",
    "DegenerateError",
    "FLAG_CLAIMED_EXTREMUM",
    "FLAG_U",
    "FLAG_V",
    "FlagSpace",
    "GramData",
    "ModelPoint",
    "ModelSpace",
    "NU_PREFACTOR",
    "POINT_TOL",
    "Quaternion",
    "S3S3Space",
    "S6Space",
    "SPACES",
    "StructureForms",
    "TorusSpec",
    "act",
    "cp3_components",
    "cp3_crit_residual",
    "cp3_critical_matrices",
    "cp3_from_homogeneous",
    "cp3_homogeneous",
    "cp3_nu",
    "cp3_nu_gamma_delta",
    "derive_d_table",
    "flag_basis",
    "flag_crit_residual",
    "flag_critical_matrix",
    "flag_nu",
    "flag_nu_zw",
    "flag_zw",
    "flatten_point",
    "frame_coords",
    "generators",
    "get_space",
    "gram",
    "inner_m",
    "j0_matrix",
    "jhat",
    "multi_moment",
    "normal_form_zero",
    "qconj",
    "qmul",
    "quat_block",
    "quat_gram_schmidt",
    "qunit",
    "retract",
    "s3s3_classify_critical",
    "s3s3_crit_residual",
    "s3s3_j_matrix",
    "s3s3_metric",
    "s3s3_nu",
    "s3s3_nu_vector",
    "s3s3_point",
    "s3s3_xy",
    "sp2_basis",
    "split_block",
    "structure_forms",
    "tangent_frame",
]
