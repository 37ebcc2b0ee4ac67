"""Orbit-space graphs: stabilizers, catalogs of special orbits, verification, export.

Vertices are orbits fixed by the whole torus, edges are families fixed by a
circle.  Catalogs are closed-form lifts; :func:`verify_graph` checks them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .critic import dependence_type
from .models import TorusSpec, cp3_from_homogeneous, get_space, s3s3_point
from .g2 import from_complex

__all__ = [
    "IndeterminateError",
    "StabilizerRecord",
    "Vertex",
    "Edge",
    "OrbitGraph",
    "CheckResult",
    "GraphReport",
    "stabilizer_dim",
    "build_graph",
    "verify_graph",
    "export_graph",
    "read_graph",
    "torus_type",
    "FINITE_ORDER_CAP",
    "EDGE_SAMPLES",
]

FINITE_ORDER_CAP = 12
EDGE_SAMPLES = 24
FIX_TOL = 1e-6


class IndeterminateError(ValueError):
    """A singular value sits too close to the threshold to decide the stabilizer."""


@dataclass(frozen=True)
class StabilizerRecord:
    dim: int
    finite_order: int = 1
    generator_direction: tuple[float, ...] | None = None

    def to_json(self) -> dict:
        d = None if self.generator_direction is None else [float(v) for v in self.generator_direction]
        return {"dim": self.dim, "finite_order": self.finite_order, "generator_direction": d}

    @classmethod
    def from_json(cls, d: dict) -> "StabilizerRecord":
        g = d.get("generator_direction")
        return cls(int(d["dim"]), int(d["finite_order"]), None if g is None else tuple(g))


@dataclass
class Vertex:
    label: str
    point: np.ndarray
    stabilizer: StabilizerRecord


@dataclass
class Edge:
    label: str
    endpoints: tuple[str, str] | None
    family: str
    samples: list[np.ndarray] = field(default_factory=list)


@dataclass
class OrbitGraph:
    spec: TorusSpec
    vertices: list[Vertex] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    circles: list[Edge] = field(default_factory=list)

    def degree(self, label: str) -> int:
        return sum((e.endpoints[0] == label) + (e.endpoints[1] == label)
                   for e in self.edges if e.endpoints is not None)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v.label: [] for v in self.vertices}
        for e in self.edges:
            a, b = e.endpoints
            adj[a].append(b)
            adj[b].append(a)
        return {k: sorted(v) for k, v in sorted(adj.items())}

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.vertices), len(self.edges)


# -- stabilizers -----------------------------------------------------------------

def _generator_matrix(spec: TorusSpec, p) -> np.ndarray:
    """Rows: generators in a G-orthonormal frame."""
    S = get_space(spec.space)
    gens = np.array(S.generators(spec, p))
    L = np.linalg.cholesky(S.metric(p))
    return gens @ L


def _fixing_elements(spec: TorusSpec, p, cap: int, tol: float) -> set[tuple[Fraction, ...]]:
    S = get_space(spec.space)
    found: set[tuple[Fraction, ...]] = set()
    for n in range(1, cap + 1):
        for ks in np.ndindex(*([n] * spec.rank)):
            key = tuple(Fraction(k, n) for k in ks)
            if key in found:
                continue
            s = 2 * np.pi * np.array([float(k) for k in key])
            if S.distance(S.act_effective(spec, s, p), p) <= tol:
                found.add(key)
    return found


def _reference_point(spec: TorusSpec):
    S = get_space(spec.space)
    return S.random_point(np.random.Generator(np.random.PCG64(12345)))


def stabilizer_dim(spec: TorusSpec, p, tol: float = 1e-8, order_cap: int = FINITE_ORDER_CAP) -> StabilizerRecord:
    """Dimension of the stabilizer from the corank of the generator Gram matrix.

    For a discrete stabilizer the order counts torus elements of order at most
    ``order_cap`` fixing ``p``, relative to those fixing a generic point.
    """
    S = get_space(spec.space)
    M = _generator_matrix(spec, p)
    sv = np.linalg.svd(M, compute_uv=False)
    close = [v for v in sv if tol / 10 < v < tol * 10]
    if close:
        raise IndeterminateError(f"singular value {close[0]:.3g} within a factor 10 of tol {tol:.1g}")
    dim = int(np.sum(sv <= tol))
    direction = None
    if dim == 1:
        _, _, vt = np.linalg.svd(M.T)
        coeff = vt[-1]
        d = coeff @ S.generator_angles(spec)
        d = d / np.linalg.norm(d)
        lead = d[np.argmax(np.abs(d) > 1e-9)]
        direction = tuple(float(v) + 0.0 for v in np.sign(lead) * d)
    order = 1
    if dim == 0:
        here = _fixing_elements(spec, p, order_cap, FIX_TOL)
        generic = _fixing_elements(spec, _reference_point(spec), order_cap, FIX_TOL)
        order = max(1, len(here) // max(1, len(generic)))
    return StabilizerRecord(dim, order, direction)


# -- catalogs ----------------------------------------------------------------------

def torus_type(spec: TorusSpec) -> str:
    """Which of the circles ``(t,t,t), (t,t^-1,t), (t,t,t^-1), (t,t^-1,t^-1)`` lie in an s3s3 torus."""
    if spec.kind == "t3":
        return "t3"
    inside = [name for name, w in _S3S3_CIRCLES if _contains(spec, w)]
    return ",".join(inside) if inside else "free"


_S3S3_CIRCLES = (
    ("ttt", (1, 1, 1)),
    ("t-tt", (1, -1, 1)),
    ("tt-t", (1, 1, -1)),
    ("t-t-t", (1, -1, -1)),
)
# fixed-point lifts (p, q) of each circle; the orbit-space parameter is alpha in p or q
_S3S3_CIRCLE_LIFTS = {
    "ttt": ("C", "C"),
    "t-tt": ("C", "Cj"),
    "tt-t": ("Cj", "Cj"),
    "t-t-t": ("Cj", "C"),
}


def _contains(spec: TorusSpec, w) -> bool:
    A = np.array([spec.a1, spec.a2], float)
    return np.linalg.matrix_rank(np.vstack([A, w])) == 2


def _s3s3_lift(kind: str, alpha: float = 0.0) -> np.ndarray:
    e = np.array([math.cos(alpha), math.sin(alpha), 0.0, 0.0])
    j = np.array([0.0, 0.0, 1.0, 0.0])
    p_kind, q_kind = _S3S3_CIRCLE_LIFTS[kind]
    p = e if p_kind == "C" else np.array([0.0, 0.0, math.cos(alpha), math.sin(alpha)])
    q = np.array([1.0, 0, 0, 0]) if q_kind == "C" else j
    return s3s3_point(p, q)


def _params(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def _s6_catalog(n):
    north, south = from_complex(0, 0, 0, 1.0), from_complex(0, 0, 0, -1.0)
    verts = [("N", north), ("S", south)]

    def family(i):
        def f(s):
            z = [0j, 0j, 0j]
            z[i] = complex(math.sin(math.pi * s))
            return from_complex(*z, math.cos(math.pi * s))
        return f

    edges = [(f"z{i + 1}", family(i), f"t^2 + |z{i + 1}|^2 = 1 with z{i + 1} = sin(pi s), t = cos(pi s)")
             for i in range(3)]
    return verts, edges


def _flag_matrix(cols) -> np.ndarray:
    m = np.array(cols, dtype=complex).T
    m[:, 2] /= np.linalg.det(m)
    return m


_FLAG_EDGES = (
    ("a1", 0, 1, 2, "z zp F", "(C z, C F1 + C F2), z in span(F1, F2)"),
    ("a2", 0, 1, 2, "z F zp", "(C z, C F3 + C z), z in span(F1, F2)"),
    ("a3", 0, 1, 2, "F z zp", "(C F3, C z + C F3), z in span(F1, F2)"),
    ("a4", 0, 2, 1, "z zp F", "(C z, C F1 + C F3), z in span(F1, F3)"),
    ("a5", 0, 2, 1, "F z zp", "(C F2, C z + C F2), z in span(F1, F3)"),
    ("a6", 0, 2, 1, "z F zp", "(C z, C F2 + C z), z in span(F1, F3)"),
    ("a7", 1, 2, 0, "F z zp", "(C F1, C F1 + C z), z in span(F2, F3)"),
    ("a8", 1, 2, 0, "z zp F", "(C z, C F2 + C F3), z in span(F2, F3)"),
    ("a9", 1, 2, 0, "z F zp", "(C z, C F1 + C z), z in span(F2, F3)"),
)


def _flag_catalog(n):
    F = np.eye(3)
    verts = []
    for a in range(3):
        for b in range(3):
            if b == a:
                continue
            c = 3 - a - b
            plane = "".join(str(k + 1) for k in sorted((a, b)))
            verts.append((f"A{a + 1},{plane}", _flag_matrix([F[a], F[b], F[c]])))

    def family(i, j, k, order):
        def f(s):
            z = math.sqrt(1 - s) * F[i] + math.sqrt(s) * F[j]
            zp = -math.sqrt(s) * F[i] + math.sqrt(1 - s) * F[j]
            cols = {"z": z, "zp": zp, "F": F[k]}
            return _flag_matrix([cols[c] for c in order.split()])
        return f

    edges = [(lab, family(i, j, k, order), desc + ", z = sqrt(1-s) Fi + sqrt(s) Fj")
             for lab, i, j, k, order, desc in _FLAG_EDGES]
    return verts, edges


def _cp3_catalog(n):
    E = np.eye(4)
    verts = [(f"P{k + 1}", cp3_from_homogeneous(E[k])) for k in range(4)]

    def family(a, b):
        return lambda s: cp3_from_homogeneous(math.sqrt(1 - s) * E[a] + math.sqrt(s) * E[b])

    edges = []
    for a in range(4):
        for b in range(a + 1, 4):
            edges.append((f"e{a + 1}{b + 1}", family(a, b),
                          f"[z{a + 1}:z{b + 1}] with |z{b + 1}|^2 = s, other coordinates 0"))
    return verts, edges


def _lifted_edge(S, label, f: Callable[[float], np.ndarray], family, verts, n) -> Edge:
    ends = []
    for s in (0.0, 1.0):
        q = f(s)
        best = min(verts, key=lambda v: S.distance(v[1], q))
        if S.distance(best[1], q) > 1e-9:
            raise RuntimeError(f"edge {label}: limit at s={s:g} matches no vertex")
        ends.append(best[0])
    return Edge(label, (ends[0], ends[1]), family, [f(float(s)) for s in _params(n)])


def build_graph(spec: TorusSpec, samples: int = EDGE_SAMPLES) -> OrbitGraph:
    """Catalog graph of special orbits for ``spec`` with lifted edge samples."""
    if samples < 1:
        raise ValueError("samples must be positive")
    S = get_space(spec.space)
    g = OrbitGraph(spec)
    if spec.space == "s3s3":
        if spec.kind == "t3":
            for name, w in _S3S3_CIRCLES:
                p = _s3s3_lift(name)
                g.vertices.append(Vertex(f"T3:{name}", p, stabilizer_dim(spec, p)))
            return g
        for name, w in _S3S3_CIRCLES:
            if _contains(spec, w):
                lifts = [_s3s3_lift(name, 2 * np.pi * s) for s in _params(samples)]
                g.circles.append(Edge(f"circle:{name}", None,
                                      f"fixed by ({','.join(map(str, w))}); "
                                      f"({_S3S3_CIRCLE_LIFTS[name][0]}, {_S3S3_CIRCLE_LIFTS[name][1]}) "
                                      f"lift with phase 2 pi s", lifts))
        return g
    catalog = {"s6": _s6_catalog, "flag": _flag_catalog, "cp3": _cp3_catalog}[spec.space]
    verts, edges = catalog(samples)
    for label, p in verts:
        g.vertices.append(Vertex(label, p, stabilizer_dim(spec, p)))
    for label, f, family in edges:
        g.edges.append(_lifted_edge(S, label, f, family, verts, samples))
    return g


# -- verification ------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    element: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.element}: {self.detail}"


@dataclass
class GraphReport:
    spec: TorusSpec
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _stab_or_none(spec, p, tol):
    try:
        return stabilizer_dim(spec, p, tol)
    except IndeterminateError:
        return None


def _direction_spread(dirs) -> float:
    d0 = np.array(dirs[0])
    return max(min(np.linalg.norm(np.array(d) - d0), np.linalg.norm(np.array(d) + d0)) for d in dirs)


def _check_family(spec, S, e: Edge, tol, add):
    worst_nu = worst_crit = 0.0
    dims, dirs, deps = [], [], []
    for q in e.samples:
        st = _stab_or_none(spec, q, tol)
        dims.append(None if st is None else st.dim)
        if st is not None and st.generator_direction is not None:
            dirs.append(st.generator_direction)
        if spec.kind == "t2":
            worst_nu = max(worst_nu, abs(S.nu(spec, q)))
            worst_crit = max(worst_crit, float(np.abs(S.crit_residual(spec, q)).max()))
            deps.append(dependence_type(spec, q))
    add("edge-samples", e.label, len(e.samples) >= 20, f"{len(e.samples)} samples")
    add("edge-stabilizer", e.label, all(d == 1 for d in dims), f"dims {sorted(set(map(str, dims)))}")
    if dirs:
        spread = _direction_spread(dirs)
        add("edge-direction", e.label, spread <= 1e-6 and len(dirs) == len(e.samples),
            f"direction {tuple(round(v, 6) for v in dirs[0])}, spread {spread:.1e}")
    if spec.kind == "t2":
        add("edge-nu", e.label, worst_nu <= tol, f"max |nu| {worst_nu:.1e}")
        add("edge-critical", e.label, worst_crit <= tol, f"max residual {worst_crit:.1e}")
        add("edge-dependence", e.label, all(d == "real" for d in deps), f"types {sorted(set(deps))}")


def verify_graph(spec: TorusSpec, g: OrbitGraph, tol: float = 1e-8) -> GraphReport:
    """Numerical checks of every catalog element; never raises on a failed check."""
    S = get_space(spec.space)
    checks: list[CheckResult] = []

    def add(name, element, ok, detail):
        checks.append(CheckResult(name, element, bool(ok), detail))

    if g.spec != spec:
        add("spec", "graph", False, f"graph built for {g.spec.label()}, checked against {spec.label()}")
    for v in g.vertices:
        st = _stab_or_none(spec, v.point, tol)
        want = 1 if spec.kind == "t3" else 2
        add("vertex-stabilizer", v.label, st is not None and st.dim == want,
            f"dim {None if st is None else st.dim} (want {want})")
        if spec.kind == "t2":
            norm = sum(float(np.linalg.norm(u)) for u in S.generators(spec, v.point))
            add("vertex-generators", v.label, norm <= max(tol, 1e-10), f"|U| + |V| = {norm:.1e}")
    for e in g.edges + g.circles:
        _check_family(spec, S, e, tol, add)
    if spec.space != "s3s3":
        for v in g.vertices:
            add("trivalence", v.label, g.degree(v.label) == 3, f"degree {g.degree(v.label)}")
    families = g.edges + g.circles
    for i in range(len(families)):
        for j in range(i + 1, len(families)):
            a, b = families[i], families[j]
            dmin = min(float(np.linalg.norm(S.signature(spec, x) - S.signature(spec, y)))
                       for x in a.samples for y in b.samples)
            add("disjoint", f"{a.label}|{b.label}", dmin > 10 * tol, f"min orbit separation {dmin:.3e}")
    if spec.kind == "t3":
        pts = [S.signature(spec, v.point) for v in g.vertices]
        dmin = min((float(np.linalg.norm(pts[i] - pts[j])) for i in range(len(pts))
                    for j in range(i + 1, len(pts))), default=math.inf)
        add("disjoint", "t3-points", dmin > 10 * tol, f"min orbit separation {dmin:.3e}")
    return GraphReport(spec, checks)


# -- export ------------------------------------------------------------------------

def _flat(S, p) -> list[float]:
    # adding 0.0 turns -0.0 into 0.0 so documents are stable under a round trip
    return [float(x) + 0.0 for x in S.to_flat(p)]


def _spec_json(spec: TorusSpec) -> dict:
    return {"space": spec.space, "kind": spec.kind,
            "a1": None if spec.a1 is None else list(spec.a1),
            "a2": None if spec.a2 is None else list(spec.a2)}


def _edge_json(S, e: Edge) -> dict:
    return {"label": e.label, "endpoints": None if e.endpoints is None else list(e.endpoints),
            "family": e.family, "samples": [_flat(S, q) for q in e.samples]}


def export_graph(g: OrbitGraph, fmt: str = "json") -> str:
    """DOT or JSON text with labels in sorted order."""
    S = get_space(g.spec.space)
    verts = sorted(g.vertices, key=lambda v: v.label)
    edges = sorted(g.edges, key=lambda e: e.label)
    circles = sorted(g.circles, key=lambda e: e.label)
    if fmt == "dot":
        lines = [f'graph "{g.spec.label()}" {{']
        for v in verts:
            lines.append(f'  "{v.label}" [stabilizer_dim={v.stabilizer.dim}];')
        for c in circles:
            lines.append(f'  "{c.label}" [shape=circle];')
        for e in edges:
            a, b = e.endpoints
            lines.append(f'  "{a}" -- "{b}" [label="{e.label}"];')
        for c in circles:
            lines.append(f'  "{c.label}" -- "{c.label}" [label="{c.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "torus": _spec_json(g.spec),
            "vertices": [{"label": v.label, "point": _flat(S, v.point),
                          "stabilizer": v.stabilizer.to_json()} for v in verts],
            "edges": [_edge_json(S, e) for e in edges],
            "circles": [_edge_json(S, c) for c in circles],
            "adjacency": g.adjacency(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}; expected dot or json")


def read_graph(text: str) -> OrbitGraph:
    """Inverse of :func:`export_graph` for the JSON format."""
    doc = json.loads(text)
    t = doc["torus"]
    spec = TorusSpec(t["space"], None if t["a1"] is None else tuple(t["a1"]),
                     None if t["a2"] is None else tuple(t["a2"]), t["kind"])
    S = get_space(spec.space)

    def edge(d):
        ends = None if d["endpoints"] is None else tuple(d["endpoints"])
        return Edge(d["label"], ends, d["family"], [S.from_flat(q) for q in d["samples"]])

    return OrbitGraph(
        spec,
        [Vertex(v["label"], S.from_flat(v["point"]), StabilizerRecord.from_json(v["stabilizer"]))
         for v in doc["vertices"]],
        [edge(e) for e in doc["edges"]],
        [edge(c) for c in doc["circles"]],
    )
