"""Command-line front end: ``nkm verify | extrema | graph | invariants``.

Settings resolve as command line, then ``--config`` file, then the table in
:mod:`nkm.defaults`.  Exit codes: 0 pass, 1 failed check, 2 empty result,
3 graph verification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .checks import identity_checks, invariant_suite
from .critic import SearchConfig, find_extrema, flag_extremum_audit, format_record
from .defaults import default, defaults_text
from .graphs import build_graph, export_graph, verify_graph
from .models import SPACES, TorusSpec, get_space, s3s3_classify_critical

__all__ = ["main", "RunConfig", "UsageError", "load_config", "resolve"]

EXIT_OK, EXIT_FAIL, EXIT_EMPTY, EXIT_GRAPH, EXIT_USAGE = 0, 1, 2, 3, 64

_KEYS = ("space", "torus", "a1", "a2", "seed", "tol", "output", "format", "starts", "samples", "exact", "force")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    space: str
    spec: TorusSpec
    seed: int
    tol: float
    output: str | None
    format: str | None
    starts: int
    samples: int
    exact: bool
    force: bool


def _weights(text: str) -> tuple[int, int, int]:
    try:
        vals = tuple(int(v) for v in str(text).split(","))
    except ValueError:
        raise UsageError(f"weights must be three comma separated integers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"weights must have three entries, got {text!r}")
    return vals


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def load_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def resolve(command: str, args: argparse.Namespace) -> RunConfig:
    """Merge command line, config file and defaults, then validate."""
    conf = load_config(args.config) if args.config else {}

    def pick(key):
        v = getattr(args, key)
        if v is not None:
            return v
        if key in conf:
            return conf[key]
        return default(key)

    space = pick("space")
    if space not in SPACES:
        raise UsageError(f"unknown space {space!r}; expected one of {', '.join(SPACES)}")
    torus = pick("torus")
    if torus not in ("t2", "t3"):
        raise UsageError(f"torus must be t2 or t3, got {torus!r}")
    explicit_weights = any(getattr(args, k) is not None or k in conf for k in ("a1", "a2"))
    try:
        if space == "s3s3" and torus == "t2":
            spec = TorusSpec(space, _weights(pick("a1")), _weights(pick("a2")))
        else:
            if explicit_weights:
                raise UsageError("--a1/--a2 only apply to s3s3 two-tori")
            spec = TorusSpec(space, kind=torus)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        seed, starts, samples = int(pick("seed")), int(pick("starts")), int(pick("samples"))
        tol = float(pick("tol"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if seed < 0 or starts < 1 or samples < 1 or not tol > 0:
        raise UsageError("seed must be >= 0; starts, samples and tol must be positive")
    fmt = pick("format")
    allowed = {"graph": ("json", "dot"), "extrema": ("text", "json")}.get(command, ("text",))
    if fmt is not None and fmt not in allowed:
        raise UsageError(f"format for {command} must be one of {', '.join(allowed)}")
    if command in ("extrema", "invariants") and torus != "t2":
        raise UsageError(f"{command} needs a two-torus")
    return RunConfig(command, space, spec, seed, tol, pick("output"), fmt, starts, samples,
                     _bool(pick("exact")), _bool(pick("force")))


# -- commands ---------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> tuple[int, list[str]]:
    checks = identity_checks(cfg.space, exact=cfg.exact, samples=min(cfg.samples, 10_000), seed=cfg.seed)
    lines = [f"verify {cfg.space}"] + [c.line() for c in checks]
    ok = all(c.passed for c in checks)
    lines.append("result: pass" if ok else "result: FAIL " + ", ".join(c.name for c in checks if not c.passed))
    return (EXIT_OK if ok else EXIT_FAIL), lines


def _s3s3_comparison(spec: TorusSpec, values: list[float], tol: float = 1e-6) -> list[str]:
    data = s3s3_classify_critical(spec.b)
    closed = sorted({d.value for d in data})
    lines = [f"closed form: {d.relation} level {d.level} value {d.value:.12f}" for d in data]
    for v in closed:
        hit = any(abs(v - w) <= tol for w in values)
        lines.append(f"{'match' if hit else 'missing'} closed-form value {v:.12f}")
    for w in values:
        if not any(abs(v - w) <= tol for v in closed):
            lines.append(f"unmatched located value {w:.12f}")
    return lines


def cmd_extrema(cfg: RunConfig) -> tuple[int, list[str]]:
    result = find_extrema(cfg.spec, SearchConfig(n_starts=cfg.starts, seed=cfg.seed))
    if not result.records:
        return EXIT_EMPTY, [f"no critical records ({result.dropped} of {result.runs} runs dropped)"]
    if cfg.format == "json":
        S = get_space(cfg.space)
        doc = {
            "torus": cfg.spec.label(), "runs": result.runs, "dropped": result.dropped,
            "records": [{"value": r.value, "grad_norm": r.grad_norm, "gap": r.gap, "class": r.second_order,
                         "dependence": r.dependence, "count": r.count,
                         "point": [float(x) + 0.0 for x in S.to_flat(r.point)]} for r in result.records],
        }
        return EXIT_OK, json.dumps(doc, indent=2, sort_keys=True).splitlines()
    lines = [f"extrema {cfg.spec.label()} starts={cfg.starts} seed={cfg.seed} runs={result.runs} "
             f"dropped={result.dropped}"]
    lines += [format_record(r) for r in result.records]
    if cfg.space == "s3s3":
        lines += _s3s3_comparison(cfg.spec, result.values())
    if cfg.space == "flag":
        lines += flag_extremum_audit(result).lines()
    return EXIT_OK, lines


def cmd_graph(cfg: RunConfig) -> tuple[int, list[str], str | None]:
    g = build_graph(cfg.spec)
    report = verify_graph(cfg.spec, g, cfg.tol)
    lines = report.lines()
    if not report.passed and not cfg.force:
        return EXIT_GRAPH, lines + ["graph verification failed; nothing written (use --force)"], None
    doc = export_graph(g, cfg.format or "json")
    return (EXIT_OK if report.passed else EXIT_GRAPH), lines, doc


def cmd_invariants(cfg: RunConfig) -> tuple[int, list[str]]:
    checks = invariant_suite(cfg.spec, cfg.samples, cfg.seed)
    lines = [f"invariants {cfg.spec.label()} samples={cfg.samples} seed={cfg.seed}"]
    lines += [c.line() for c in checks]
    bad = [c for c in checks if not c.passed]
    lines.append("result: pass" if not bad else f"result: FAIL worst offender: {bad[0].name} {bad[0].residual}")
    return (EXIT_OK if not bad else EXIT_FAIL), lines


# -- entry point --------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--space", help="s6, flag, cp3 or s3s3")
    p.add_argument("--torus", help="t2 (default) or t3")
    p.add_argument("--a1", help="s3s3 weight row, e.g. 2,3,1")
    p.add_argument("--a2", help="s3s3 weight row, e.g. 2,3,5")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--output", "-o")
    p.add_argument("--format")
    p.add_argument("--config", help="file of 'key = value' lines mirroring these flags")
    p.add_argument("--starts", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--exact", action="store_const", const=True, default=None)
    p.add_argument("--force", action="store_const", const=True, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nkm", description="Multi-moment maps of torus actions on nearly Kaehler six-manifolds")
    parser.add_argument("--show-defaults", action="store_true", help="print the defaults table and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _common()
    sub.add_parser("verify", parents=[common], help="exact structure equations and identities")
    sub.add_parser("extrema", parents=[common], help="multistart search for critical orbits")
    sub.add_parser("graph", parents=[common], help="build, verify and export the orbit-space graph")
    sub.add_parser("invariants", parents=[common], help="sampled invariant suite")
    return parser


def _emit(lines: Sequence[str], path: str | None, stream) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.show_defaults:
            sys.stdout.write(defaults_text())
            return EXIT_OK
        if not args.command:
            raise UsageError("nkm: a command is required (verify, extrema, graph, invariants)")
        cfg = resolve(args.command, args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    if cfg.command == "graph":
        code, lines, doc = cmd_graph(cfg)
        if doc is None:
            _emit(lines, None, sys.stderr)
        elif cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(doc)
            _emit(lines, None, sys.stdout)
        else:
            sys.stdout.write(doc)
            if code != EXIT_OK:
                _emit(lines, None, sys.stderr)
        return code
    handler = {"verify": cmd_verify, "extrema": cmd_extrema, "invariants": cmd_invariants}[cfg.command]
    code, lines = handler(cfg)
    _emit(lines, cfg.output, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
