"""Critical orbits of multi-moment maps.

Gradients come from ``d nu = 3 psi_+(U, V, .)`` in frame coordinates.  Extrema
are located by multistart gradient ascent and descent with Armijo
backtracking and retraction.  Saddles are reached by a Levenberg-Marquardt
solve of ``d nu = 0`` (the ``stationary`` mode).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .models import DegenerateError, ModelSpace, TorusSpec, get_space

__all__ = [
    "SearchConfig",
    "CriticalRecord",
    "SearchResult",
    "riemannian_grad",
    "fd_grad",
    "grad_norm",
    "find_extrema",
    "second_order_classify",
    "criticality_gap",
    "dependence_type",
    "zero_level_sample",
    "sample_values",
    "stabilizer_corank",
    "orbit_distance",
    "format_record",
    "FlagAudit",
    "flag_extremum_audit",
    "thread_count",
]

FD_STEP = 1e-5
SECOND_ORDER_STEP = 1e-3
MODES = ("ascent", "descent", "stationary")


def thread_count() -> int:
    """Worker threads for independent tasks, bounded by ``NKM_THREADS``."""
    try:
        return max(1, int(os.environ.get("NKM_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchConfig:
    n_starts: int = 64
    max_iter: int = 2000
    step0: float = 1.0
    shrink: float = 0.5
    grad_tol: float = 1e-9
    polish_tol: float = 1e-4
    cluster_tol: float = 1e-7
    seed: int = 0
    armijo: float = 1e-4
    modes: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be at least 1")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.grad_tol <= 0 or self.polish_tol <= 0 or self.cluster_tol <= 0 or self.step0 <= 0:
            raise ValueError("tolerances and step0 must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.modes is not None:
            bad = set(self.modes) - set(MODES)
            if bad or not self.modes:
                raise ValueError(f"modes must be a non-empty subset of {MODES}")

    def resolved_modes(self, spec: TorusSpec) -> tuple[str, ...]:
        if self.modes is not None:
            return tuple(self.modes)
        if spec.space == "s3s3":
            return MODES
        return ("ascent", "descent")


@dataclass
class CriticalRecord:
    space: str
    spec: TorusSpec
    point: np.ndarray
    value: float
    grad_norm: float
    gap: float
    h2: float
    stabilizer_dim: int
    second_order: str = "unclassified"
    dependence: str = "unclassified"
    count: int = 1

    def signature(self) -> tuple[float, float, int]:
        return (round(abs(self.value), 6), round(self.h2, 6), self.stabilizer_dim)


@dataclass
class SearchResult:
    spec: TorusSpec
    records: list[CriticalRecord]
    runs: int
    dropped: int
    config: SearchConfig = field(default_factory=SearchConfig)

    def values(self) -> list[float]:
        return [r.value for r in self.records]

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


# -- gradients ------------------------------------------------------------------

def riemannian_grad(spec: TorusSpec, p) -> np.ndarray:
    """Frame coordinates of the metric dual of ``3 psi_+(U, V, .)``."""
    S = get_space(spec.space)
    return np.linalg.solve(S.metric(p), S.dnu(spec, p))


def fd_grad(spec: TorusSpec, p, h: float = FD_STEP) -> np.ndarray:
    """Gradient from central differences of nu along retracted frame curves."""
    S = get_space(spec.space)
    d = np.array([(S.nu(spec, S.step(p, e, h)) - S.nu(spec, S.step(p, e, -h))) / (2 * h)
                  for e in np.eye(6)])
    return np.linalg.solve(S.metric(p), d)


def grad_norm(spec: TorusSpec, p) -> float:
    S = get_space(spec.space)
    g = riemannian_grad(spec, p)
    return float(math.sqrt(max(0.0, g @ S.metric(p) @ g)))


def criticality_gap(spec: TorusSpec, p) -> tuple[float, float]:
    """``(h^2 - nu^2, |‖grad‖^2 - 9 gap| / (1 + 9 |gap|))``."""
    S = get_space(spec.space)
    gap = S.gram(spec, p).h2 - S.nu(spec, p) ** 2
    n2 = grad_norm(spec, p) ** 2
    return float(gap), float(abs(n2 - 9 * gap) / (1 + 9 * abs(gap)))


def stabilizer_corank(spec: TorusSpec, p, tol: float = 1e-6) -> int:
    """Number of independent torus directions whose generator vanishes at ``p``."""
    S = get_space(spec.space)
    gens = np.array(S.generators(spec, p))
    gm = gens @ S.metric(p) @ gens.T
    ev = np.linalg.eigvalsh(gm)
    return int(np.sum(ev <= tol * tol))


# -- search ---------------------------------------------------------------------

def _climb(S: ModelSpace, spec: TorusSpec, p, sign: float, cfg: SearchConfig):
    """Armijo gradient ascent of ``sign * nu`` down to ``polish_tol``, then a stationary polish."""
    p, ok = _ascend(S, spec, p, sign, cfg)
    if not ok:
        return p, False
    return _stationary(S, spec, p, cfg)


def _ascend(S: ModelSpace, spec: TorusSpec, p, sign: float, cfg: SearchConfig):
    f = sign * S.nu(spec, p)
    t = cfg.step0
    for _ in range(cfg.max_iter):
        G = S.metric(p)
        g = np.linalg.solve(G, S.dnu(spec, p))
        n2 = float(g @ G @ g)
        if math.sqrt(n2) <= max(cfg.polish_tol, cfg.grad_tol):
            return p, True
        d = sign * g
        t = min(cfg.step0, t / cfg.shrink)
        while True:
            try:
                q = S.step(p, d, t)
            except DegenerateError:
                q = None
            if q is not None:
                fq = sign * S.nu(spec, q)
                if fq >= f + cfg.armijo * t * n2:
                    break
            t *= cfg.shrink
            if t < 1e-16:
                return p, False
        p, f = q, fq
    return p, False


def _stationary(S: ModelSpace, spec: TorusSpec, p, cfg: SearchConfig, h: float = 1e-6):
    """Levenberg-Marquardt on the frame one-form ``d nu``."""
    mu = 1e-3
    w = S.dnu(spec, p)
    r2 = float(w @ w)
    for _ in range(cfg.max_iter // 10 + 20):
        G = S.metric(p)
        g = np.linalg.solve(G, w)
        if math.sqrt(max(0.0, g @ G @ g)) <= cfg.grad_tol:
            return p, True
        Jm = np.column_stack([(S.dnu(spec, S.step(p, e, h)) - S.dnu(spec, S.step(p, e, -h))) / (2 * h)
                              for e in np.eye(6)])
        A = Jm.T @ Jm
        rhs = Jm.T @ w
        accepted = False
        for _ in range(30):
            delta = -np.linalg.solve(A + mu * np.diag(np.diag(A) + 1e-12), rhs)
            try:
                q = S.step(p, delta)
            except DegenerateError:
                mu *= 10
                continue
            wq = S.dnu(spec, q)
            rq = float(wq @ wq)
            if rq < r2:
                p, w, r2 = q, wq, rq
                mu = max(mu / 10, 1e-12)
                accepted = True
                break
            mu *= 10
        if not accepted:
            return p, False
    return p, False


def _run_start(spec: TorusSpec, cfg: SearchConfig, seq: np.random.SeedSequence, modes):
    S = get_space(spec.space)
    rng = np.random.Generator(np.random.PCG64(seq))
    p0 = S.random_point(rng)
    out = []
    for mode in modes:
        if mode == "ascent":
            p, ok = _climb(S, spec, p0, 1.0, cfg)
        elif mode == "descent":
            p, ok = _climb(S, spec, p0, -1.0, cfg)
        else:
            p, ok = _stationary(S, spec, p0, cfg)
        out.append((mode, p, ok))
    return out


def _make_record(spec: TorusSpec, p) -> CriticalRecord:
    S = get_space(spec.space)
    gd = S.gram(spec, p)
    value = S.nu(spec, p)
    return CriticalRecord(spec.space, spec, p, value, grad_norm(spec, p), gd.h2 - value ** 2, gd.h2,
                          stabilizer_corank(spec, p))


def _cluster(records: list[CriticalRecord], tol: float) -> list[CriticalRecord]:
    records = sorted(records, key=lambda r: (r.value, r.signature(), r.grad_norm))
    out: list[CriticalRecord] = []
    for r in records:
        for c in out:
            if abs(c.value - r.value) <= tol and c.signature()[2] == r.signature()[2] \
                    and abs(c.h2 - r.h2) <= max(tol, 1e-6):
                c.count += 1
                if r.grad_norm < c.grad_norm:
                    c.point, c.grad_norm, c.gap, c.value = r.point, r.grad_norm, r.gap, r.value
                break
        else:
            out.append(replace(r))
    return out


def find_extrema(spec: TorusSpec, cfg: SearchConfig | None = None, *, classify: bool = True,
                 threads: int | None = None) -> SearchResult:
    """Multistart search for critical orbits, clustered by value and signature."""
    cfg = cfg or SearchConfig()
    if spec.kind != "t2":
        raise ValueError("find_extrema needs a two-torus")
    modes = cfg.resolved_modes(spec)
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.n_starts)
    workers = threads if threads is not None else thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            runs = list(ex.map(lambda s: _run_start(spec, cfg, s, modes), seqs))
    else:
        runs = [_run_start(spec, cfg, s, modes) for s in seqs]
    accepted, dropped, total = [], 0, 0
    for run in runs:
        for _mode, p, ok in run:
            total += 1
            if not ok:
                dropped += 1
                continue
            rec = _make_record(spec, p)
            if rec.grad_norm > cfg.grad_tol or rec.gap > 1e-8 * (1 + rec.h2):
                dropped += 1
                continue
            accepted.append(rec)
    records = _cluster(accepted, cfg.cluster_tol)
    if classify:
        for r in records:
            r.second_order = second_order_classify(spec, r.point)
            r.dependence = dependence_type(spec, r.point)
    return SearchResult(spec, records, total, dropped, cfg)


# -- classification --------------------------------------------------------------

def second_order_classify(spec: TorusSpec, p, h: float = SECOND_ORDER_STEP, n_dirs: int = 24,
                          seed: int = 0) -> str:
    """Signs of second central differences of nu along random unit directions.

    A difference counts as zero below ten times the rounding floor
    ``4 eps (1 + |nu|) / h^2``; any such direction makes the result degenerate.
    """
    if n_dirs < 12:
        raise ValueError("use at least 12 directions")
    S = get_space(spec.space)
    rng = np.random.Generator(np.random.PCG64(seed))
    f0 = S.nu(spec, p)
    G = S.metric(p)
    floor = 4 * np.finfo(float).eps * (1 + abs(f0)) / h ** 2
    d2 = []
    for _ in range(n_dirs):
        d = rng.standard_normal(6)
        d /= math.sqrt(d @ G @ d)
        d2.append((S.nu(spec, S.step(p, d, h)) + S.nu(spec, S.step(p, d, -h)) - 2 * f0) / h ** 2)
    d2 = np.array(d2)
    if np.any(np.abs(d2) < 10 * floor):
        return "degenerate"
    if np.all(d2 < 0):
        return "max"
    if np.all(d2 > 0):
        return "min"
    return "saddle"


def dependence_type(spec: TorusSpec, p, tol: float = 1e-6) -> str:
    """``real`` if U, V are R-dependent, ``complex`` if C-dependent, else ``independent``."""
    S = get_space(spec.space)
    u, v = S.generators(spec, p)[:2]
    G = S.metric(p)
    L = np.linalg.cholesky(G).T
    a, b = L @ u, L @ v
    scale = max(1.0, np.linalg.norm(a), np.linalg.norm(b))
    if np.linalg.svd(np.column_stack([a, b]), compute_uv=False)[-1] <= tol * scale:
        return "real"
    Ju = L @ (S.complex_structure(p) @ u)
    Q, _ = np.linalg.qr(np.column_stack([a, Ju]))
    res = b - Q @ (Q.T @ b)
    if np.linalg.norm(res) <= tol * scale:
        return "complex"
    return "independent"


# -- sampling -------------------------------------------------------------------

def sample_values(spec: TorusSpec, n: int, seed: int = 0) -> np.ndarray:
    S = get_space(spec.space)
    rng = np.random.Generator(np.random.PCG64(seed))
    return np.array([S.nu(spec, S.random_point(rng)) for _ in range(n)])


def _arc(S: ModelSpace, p, q):
    def point(s):
        return S.retract((1 - s) * p + s * q)
    return point


def zero_level_sample(spec: TorusSpec, n: int, seed: int = 0, max_tries: int | None = None,
                      normalize: bool = True) -> list[np.ndarray]:
    """Points of the zero level found by bracketing sign changes of nu along arcs."""
    S = get_space(spec.space)
    rng = np.random.Generator(np.random.PCG64(seed))
    max_tries = max_tries if max_tries is not None else 50 * max(n, 1)
    out: list[np.ndarray] = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"zero_level_sample: found {len(out)} of {n} points in {max_tries} arcs")
        p, q = S.random_point(rng), S.random_point(rng)
        fp, fq = S.nu(spec, p), S.nu(spec, q)
        if fp * fq >= 0:
            continue
        arc = _arc(S, p, q)
        try:
            s = brentq(lambda s: S.nu(spec, arc(s)), 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            z = arc(s)
        except (ValueError, DegenerateError):
            continue
        if abs(S.nu(spec, z)) > 1e-12:
            continue
        if normalize:
            try:
                z = S.normal_form_zero(spec, z, tol=1e-9)
            except ValueError:
                continue
        out.append(z)
    return out


# -- orbit comparison ---------------------------------------------------------------

def orbit_distance(spec: TorusSpec, p, target, grid: int = 12) -> tuple[float, np.ndarray]:
    """Smallest distance from ``target`` to the torus orbit of ``p``, and the angles."""
    from scipy.optimize import minimize

    S = get_space(spec.space)

    def cost(t):
        return S.distance(S.act(spec, t, p), target) ** 2

    angles = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    best = min(((cost((a, b)), (a, b)) for a in angles for b in angles), key=lambda c: c[0])
    res = minimize(cost, np.array(best[1]), method="BFGS", options={"gtol": 1e-14})
    t = res.x if res.fun <= best[0] else np.array(best[1])
    return math.sqrt(max(0.0, cost(t))), t


@dataclass(frozen=True)
class FlagAudit:
    formula_value: float
    located_value: float
    claimed_magnitude: float
    alignment_distance: float
    angles: tuple[float, float]

    @property
    def ratio(self) -> float:
        return abs(self.formula_value) / self.claimed_magnitude

    def lines(self) -> list[str]:
        return [
            f"flag audit: nu at printed matrix (formula) = {self.formula_value:.12f}",
            f"flag audit: located extremum of the same sign = {self.located_value:.12f}",
            f"flag audit: ratio |formula| / claimed {self.claimed_magnitude:.12f} = {self.ratio:.12f}",
            f"flag audit: alignment distance to located orbit = {self.alignment_distance:.3e}",
        ]


def flag_extremum_audit(result: SearchResult) -> FlagAudit:
    """Compare the located flag extremum with the printed extremal matrix."""
    from .models import FLAG_CLAIMED_EXTREMUM, flag_critical_matrix, flag_nu

    spec = result.spec
    target = flag_critical_matrix()
    formula = flag_nu(target)
    same_sign = [r for r in result.records if np.sign(r.value) == np.sign(formula)]
    if not same_sign:
        raise RuntimeError("no located extremum with the sign of the printed matrix")
    rec = max(same_sign, key=lambda r: abs(r.value))
    dist, t = orbit_distance(spec, rec.point, target)
    return FlagAudit(formula, rec.value, FLAG_CLAIMED_EXTREMUM, dist, (float(t[0]), float(t[1])))


def format_record(r: CriticalRecord) -> str:
    b = ",".join(str(int(v)) for v in r.spec.b) if r.spec.a1 is not None else "-"
    payload = " ".join(f"{v:.17g}" for v in get_space(r.space).to_flat(r.point))
    return (f"{r.space} b={b} value={r.value:.12f} grad_norm={r.grad_norm:.3e} gap={r.gap:.3e} "
            f"class={r.second_order} dependence={r.dependence} count={r.count} point={payload}")
