"""Configuration-driven verification suites and report emission.

A suite run executes a selected set of identity checks deterministically:
every check draws from its own generator seeded by the master seed and the
check id, so results are independent of execution order.  Reports carry one
record per executed check and serialize to JSON or CSV with residuals
printed to twelve significant digits, making seeded reruns byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import checks as _checks
from .grid import GridSpec, make_grid
from .magnetics import GaugeFunction, MagneticField, VectorPotential

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

__all__ = [
    "SuiteConfig",
    "CheckRecord",
    "Report",
    "run_suite",
    "emit_report",
    "parse_report",
    "available_suites",
    "field_from_spec",
    "potential_from_spec",
    "gauge_from_spec",
    "load_config",
]

REPORT_VERSION = "1"

ALL_SUITES = ("grid", "inequalities", "magnetics", "weyl", "products", "super", "seminorms")


@dataclass(frozen=True)
class SuiteConfig:
    """Verification run parameters.

    ``tolerances`` maps check ids (or the wildcard ``"*"``) to overrides;
    ``suites`` selects which groups run.  Field, potential and gauge specs
    follow the serializable family schema, e.g.
    ``{"family": "constant", "b": [[0, 1], [-1, 0]]}``.
    """

    d: int = 1
    n: int = 15
    L: float = 12.0
    eps: float = 1.0
    lam: float = 1.0
    seed: int = 2024
    suites: tuple = ALL_SUITES
    tolerances: dict = field(default_factory=dict)
    potential: dict = field(default_factory=lambda: {"family": "zero"})
    field_spec: dict = field(default_factory=lambda: {"family": "zero"})
    gauge: dict | None = None

    def __post_init__(self):
        unknown = set(self.suites) - set(ALL_SUITES)
        if unknown:
            raise ValueError(f"unknown suites {sorted(unknown)}; available: {ALL_SUITES}")
        for k, v in self.tolerances.items():
            if not (isinstance(v, (int, float)) and v >= 0):
                raise ValueError(f"tolerance override for {k!r} must be a nonnegative number")


@dataclass(frozen=True)
class CheckRecord:
    id: str
    anchor: str
    residual: float
    tol: float
    passed: bool
    ms: float


@dataclass(frozen=True)
class Report:
    version: str
    env: dict
    checks: tuple


class _Context:
    """Lazy per-run resources shared by checks: default grid and zero gauge."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.n = cfg.n
        self.L = cfg.L
        self.grid = make_grid(cfg.d, cfg.n, cfg.L)
        self.A0 = potential_from_spec({"family": "zero"}, d=cfg.d)


def available_suites() -> tuple:
    return ALL_SUITES


def _check_rng(seed: int, check_id: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(check_id.encode())]))


def run_suite(config: SuiteConfig) -> Report:
    """Execute the selected suites; per-check failures are recorded, never raised."""
    ctx = _Context(config)
    records = []
    wildcard = config.tolerances.get("*")
    for spec in _checks.REGISTRY:
        if spec.suite not in config.suites:
            continue
        tol = config.tolerances.get(spec.id, wildcard if wildcard is not None else spec.tol)
        rng = _check_rng(config.seed, spec.id)
        t0 = time.perf_counter()
        try:
            residual = float(spec.fn(ctx, rng))
        except Exception:
            residual = float("nan")
        ms = (time.perf_counter() - t0) * 1000.0
        passed = bool(np.isfinite(residual) and residual <= tol)
        records.append(CheckRecord(spec.id, spec.anchor, residual, float(tol), passed, ms))
    env = {
        "d": config.d,
        "n": config.n,
        "L": config.L,
        "eps": config.eps,
        "lambda": config.lam,
        "seed": config.seed,
    }
    return Report(REPORT_VERSION, env, tuple(records))


def gating_failures(report: Report) -> list:
    """Failed checks that are meant to gate (reports excluded)."""
    gating = {s.id for s in _checks.REGISTRY if s.gating}
    return [r for r in report.checks if r.id in gating and not r.passed]


# --------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    if isinstance(x, float) and np.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _record_dict(r: CheckRecord) -> dict:
    return {
        "id": r.id,
        "anchor": r.anchor,
        "residual": float(_fmt(r.residual)),
        "tol": float(_fmt(r.tol)),
        "pass": r.passed,
        "ms": float(f"{r.ms:.3f}"),
    }


def emit_report(report: Report, path: str | None, format: str = "json") -> str:
    """Serialize a report; returns the text and writes it when given a path."""
    if format == "json":
        payload = {
            "version": report.version,
            "env": report.env,
            "checks": [_record_dict(r) for r in report.checks],
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif format == "csv":
        buf = io.StringIO()
        for key, value in (("version", report.version), *report.env.items()):
            buf.write(f"# {key}={value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "anchor", "residual", "tol", "pass", "ms"])
        for r in report.checks:
            writer.writerow([r.id, r.anchor, _fmt(r.residual), _fmt(r.tol), str(r.passed).lower(), f"{r.ms:.3f}"])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {format!r}; use json or csv")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def parse_report(text: str, format: str = "json") -> Report:
    """Inverse of :func:`emit_report` on its own output."""
    if format == "json":
        payload = json.loads(text)
        checks = tuple(
            CheckRecord(c["id"], c["anchor"], float(c["residual"]), float(c["tol"]), bool(c["pass"]), float(c["ms"]))
            for c in payload["checks"]
        )
        return Report(payload["version"], payload["env"], checks)
    if format == "csv":
        env: dict = {}
        version = REPORT_VERSION
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key == "version":
                    version = value
                elif key in ("d", "n", "seed"):
                    env[key] = int(value)
                else:
                    env[key] = float(value)
                continue
            rows.append(line)
        reader = csv.reader(rows)
        header = next(reader)
        assert header[0] == "id"
        checks = tuple(
            CheckRecord(r[0], r[1], float(r[2]), float(r[3]), r[4] == "true", float(r[5])) for r in reader
        )
        return Report(version, env, checks)
    raise ValueError(f"unknown report format {format!r}")


# --------------------------------------------------------------------------
# field / potential / gauge specification schema


def field_from_spec(spec: dict, d: int | None = None) -> MagneticField:
    """Build a magnetic field from its serializable family spec."""
    family = spec["family"]
    if family == "zero":
        return MagneticField.zero(int(spec.get("d", d or 2)))
    if family == "constant":
        return MagneticField.constant(np.asarray(spec["b"], dtype=float))
    if family in ("polynomial", "windowed"):
        tables = {tuple(int(i) for i in key.split(",")): [(float(c), tuple(e)) for c, e in val] for key, val in spec["tables"].items()}
        dd = int(spec.get("d", d or 2))
        return MagneticField(d=dd, family=family, tables=tables, window=float(spec.get("window", 1.0)))
    raise ValueError(f"unknown magnetic field family {family!r}")


def potential_from_spec(spec: dict, d: int | None = None) -> VectorPotential:
    family = spec["family"]
    if family == "zero":
        return VectorPotential.zero(int(spec.get("d", d or 1)))
    if family == "landau":
        return VectorPotential.landau(float(spec["b"]))
    if family == "symmetric":
        return VectorPotential.symmetric_gauge(float(spec["b"]))
    if family == "linear":
        m = np.asarray(spec["m"], dtype=float)
        return VectorPotential(d=m.shape[0], family="linear", m=m)
    if family == "polynomial":
        tables = {int(k): [(float(c), tuple(e)) for c, e in v] for k, v in spec["tables"].items()}
        dd = int(spec.get("d", d or len(tables)))
        return VectorPotential(d=dd, family="polynomial", tables=tables)
    raise ValueError(f"unknown vector potential family {family!r}")


def gauge_from_spec(spec: dict, d: int | None = None) -> GaugeFunction:
    table = [(float(c), tuple(e)) for c, e in spec["table"]]
    return GaugeFunction(d=int(spec.get("d", d or len(table[0][1]))), table=table)


def load_config(path: str) -> SuiteConfig:
    """Read a TOML suite configuration (no executable content)."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    grid = raw.get("grid", {})
    return SuiteConfig(
        d=int(grid.get("d", 1)),
        n=int(grid.get("n", 15)),
        L=float(grid.get("L", 12.0)),
        eps=float(raw.get("eps", 1.0)),
        lam=float(raw.get("lambda", 1.0)),
        seed=int(raw.get("seed", 2024)),
        suites=tuple(raw.get("suites", list(ALL_SUITES))),
        tolerances={k: float(v) for k, v in raw.get("tolerances", {}).items()},
        potential=raw.get("potential", {"family": "zero"}),
        field_spec=raw.get("field", {"family": "zero"}),
        gauge=raw.get("gauge"),
    )
