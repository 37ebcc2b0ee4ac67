"""Central table of default settings and tolerances (printed by ``nkm --show-defaults``)."""

from __future__ import annotations

from typing import NamedTuple

__all__ = ["Default", "DEFAULTS", "default", "defaults_text"]


class Default(NamedTuple):
    value: object
    description: str


DEFAULTS: dict[str, Default] = {
    "space": Default("s6", "model space: s6, flag, cp3 or s3s3"),
    "torus": Default("t2", "t2, or t3 for the maximal torus on s3s3"),
    "a1": Default("1,0,0", "s3s3 first weight row"),
    "a2": Default("0,1,0", "s3s3 second weight row"),
    "seed": Default(0, "seed of the splittable generator"),
    "starts": Default(64, "multistart count for extrema"),
    "max_iter": Default(2000, "line-search iterations per start"),
    "step0": Default(1.0, "initial step length"),
    "shrink": Default(0.5, "backtracking factor"),
    "armijo": Default(1e-4, "sufficient-increase constant"),
    "grad_tol": Default(1e-9, "gradient norm accepted as critical"),
    "polish_tol": Default(1e-4, "gradient norm handing over to the stationary solve"),
    "cluster_tol": Default(1e-7, "value tolerance when clustering records"),
    "fd_step": Default(1e-5, "central difference step for gradient checks"),
    "second_order_step": Default(1e-3, "step of second differences"),
    "tol": Default(1e-8, "graph verification tolerance"),
    "edge_samples": Default(24, "sample points per graph edge"),
    "order_cap": Default(12, "largest element order in finite stabilizer searches"),
    "samples": Default(1000, "points in the sampled invariant suite"),
    "format": Default(None, "text or json for extrema, json or dot for graph"),
    "output": Default(None, "output path (stdout when unset)"),
    "exact": Default(False, "print exact residuals in verify"),
    "force": Default(False, "write graphs even when verification fails"),
}


def default(key: str):
    return DEFAULTS[key].value


def defaults_text() -> str:
    width = max(map(len, DEFAULTS))
    lines = [f"{k.ljust(width)} = {v.value!s:<8}  # {v.description}" for k, v in DEFAULTS.items()]
    return "\n".join(lines) + "\n"
