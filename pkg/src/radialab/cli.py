"""Command-line front end: one subcommand per family of checks, JSON/CSV/text reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__, acceptance, diagnostics, models, quad, solver, weakform
from .models import Family

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2

DEFAULTS = {
    "a": 1.0, "Z": 1.0, "D": "3", "n": 1, "n_max": 5, "family": "both",
    "model": None, "kappa": 1.0, "lb": 1.0, "kind": None, "tol": None,
    "format": "text", "output": None,
}
WEAKFORM_MODELS = ("well-singular", "well-regular", "debye-huckel", "coulomb-green", "hydrogen")
EPSILON_MODELS = ("well-singular", "well-regular", "hydrogen")
MODEL_NAMES = ("hydrogen", "hydrogen-scaled", "delta-1d", "well-regular", "well-singular",
               "hydrogen-in-well-regular", "hydrogen-in-well-singular")
SCAN_KINDS = ("dimension", "epsilon", "critical-z")


class ConfigError(ValueError):
    pass


@dataclass
class Report:
    command: str
    summary: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    ok: bool = True

    def to_json(self) -> str:
        body = {"command": self.command, "ok": self.ok, "summary": self.summary,
                "table": {"columns": self.columns, "rows": self.rows}, "notes": self.notes}
        return json.dumps(_jsonable(body), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.columns:
            w.writerow(self.columns)
            for row in self.rows:
                w.writerow([_csv_cell(v) for v in row])
        else:
            w.writerow(["key", "value"])
            for key, value in _flatten(self.summary):
                w.writerow([key, _csv_cell(value)])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"# {self.command}"]
        for key, value in _flatten(self.summary):
            lines.append(f"{key} = {_fmt(value)}")
        if self.columns:
            cells = [[str(c) for c in self.columns]] + [[_fmt(v) for v in r] for r in self.rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(self.columns))]
            for r in cells:
                lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "text": self.to_text}[fmt]()


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _flatten(d: dict, prefix: str = ""):
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                yield from _flatten(item, f"{name}[{i}].")
        else:
            yield name, value


def _fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return "" if v is None else str(v)


def _csv_cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


# ---------------------------------------------------------------- commands


def _families(choice: str) -> list[Family]:
    return [Family.REGULAR, Family.SINGULAR] if choice == "both" else [Family(choice)]


def cmd_spectrum(cfg: dict) -> Report:
    a, n_max = cfg["a"], cfg["n_max"]
    kwargs = {} if cfg["tol"] is None else {"tol": cfg["tol"]}
    rep = Report("spectrum", {"a": a, "n_max": n_max},
                 ["family", "n", "k_analytic", "k_numeric", "E_analytic", "E_numeric", "rel_error_k"])
    ground = {}
    for fam in _families(cfg["family"]):
        exact = models.analytic_spectrum(a, fam, n_max)
        numeric = solver.eigen_spectrum(a, fam, n_max, **kwargs)
        for e, m in zip(exact, numeric):
            rep.rows.append([fam.value, e.n, e.k_n, m.k_n, e.E_n, m.E_n, abs(m.k_n - e.k_n) / e.k_n])
        ground[fam] = numeric[0].E_n
    if len(ground) == 2:
        ratio = ground[Family.REGULAR] / ground[Family.SINGULAR]
        rep.summary["E1R_over_E1S"] = ratio
        rep.notes.append(f"E1R/E1S = {ratio:.10g}")
    return rep


def cmd_weakform(cfg: dict) -> Report:
    name = cfg["model"] or "well-singular"
    a, n = cfg["a"], cfg["n"]
    implied = None
    if name in ("well-singular", "well-regular"):
        fam = Family.SINGULAR if name == "well-singular" else Family.REGULAR
        k = (n if fam is Family.REGULAR else n - 0.5) * math.pi / a
        est = weakform.well_residual(k, regular=fam is Family.REGULAR,
                                     family=weakform.default_family(a), strict=False)
        expected = 0.0 if fam is Family.REGULAR else -4.0 * math.pi / k
        params = {"a": a, "n": n, "k": k}
        if fam is Family.SINGULAR:
            implied = weakform.implied_delta_potential(est, 1.0 / k)
    elif name == "debye-huckel":
        est = weakform.debye_huckel_residual(cfg["lb"], cfg["kappa"])
        expected = -4.0 * math.pi * cfg["lb"]
        params = {"kappa": cfg["kappa"], "lambda_B": cfg["lb"]}
    elif name == "coulomb-green":
        est = weakform.coulomb_green_residual()
        expected = -1.0
        params = {}
    else:
        D = _single_dimension(cfg)
        est = weakform.hydrogen_residual_check(int(D), cfg["Z"], strict=False)
        expected = 0.0
        params = {"D": D, "Z": cfg["Z"]}
    rep = Report("weakform", {"model": name, **params, "coefficient": est.coefficient,
                              "expected": expected, "relative_spread": est.relative_spread,
                              "is_zero": est.is_zero, "consistent": est.consistent},
                 ["support_radius", "pairing", "ratio"],
                 [[R, s, s / math.exp(-1.0)] for R, s in zip(est.radii, est.pairings)])
    if implied is not None:
        rep.summary["implied_potential"] = implied.to_dict()
        rep.notes.append(f"implied potential: {implied.prefactor:.10g} * r^{implied.radial_power} "
                         "delta(r) hartree (attractive)")
    rep.ok = est.consistent
    return rep


def cmd_classify(cfg: dict) -> Report:
    rows = diagnostics.classify_catalog(cfg["a"], cfg["Z"], _single_dimension(cfg))
    rep = Report("classify", {"a": cfg["a"], "Z": cfg["Z"], "D": _single_dimension(cfg)},
                 ["model", "p", "square_integrable", "norm_converged", "cusp_measured",
                  "cusp_expected", "satisfied"])
    for r in rows:
        rep.rows.append([r.model, r.exponent, r.square_integrable, r.norm_converged,
                         r.cusp_measured, r.cusp_expected, r.cusp_satisfied])
    lit = [m for m in models.catalog(cfg["a"], cfg["Z"], _single_dimension(cfg))
           if m.cusp_literature is not None]
    for m in lit:
        c = diagnostics.cusp_check(m)
        rep.notes.append(f"{m.name}: cusp measured {_fmt(c.measured)}, expected {_fmt(c.expected)}, "
                         f"literature value {_fmt(c.literature)}")
    return rep


def _epsilon_scan(cfg: dict) -> Report:
    name = cfg["model"] or "well-singular"
    if name == "hydrogen":
        model = models.hydrogen_ground_state(3, cfg["Z"])
        term = model.potential.delta_term
    elif name == "well-singular":
        model = models.spherical_well_singular(cfg["n"], cfg["a"])
        term = model.potential.delta_term
    else:
        # the singular family's r delta(r) term measured against the regular density
        model = models.spherical_well_regular(cfg["n"], cfg["a"])
        term = models.SINGULAR_DELTA
    scan = quad.regularized_delta_expectation(model, term, quad.DEFAULT_EPSILONS)
    return Report("scan", {"kind": "epsilon", "model": name, "delta_term": term.to_dict(),
                           "fitted_exponent": scan.fitted_exponent,
                           "fitted_prefactor": scan.fitted_prefactor,
                           "r_squared": scan.r_squared, "limit_verdict": scan.limit_verdict},
                  ["epsilon", "value"], [list(p) for p in zip(scan.epsilons, scan.values)])


def _dimension_scan(cfg: dict) -> Report:
    dims = _dimensions(cfg, default=(2.0, 3.0, 4.0, 5.0))
    data = solver.hydrogen_energy_scan(dims, cfg["Z"])
    rows = [[D, num, exact, num - exact] for D, num, exact in data]
    worst = max(abs(r[3]) for r in rows)
    return Report("scan", {"kind": "dimension", "Z": cfg["Z"], "max_abs_deviation": worst},
                  ["D", "E_numeric", "E_analytic", "deviation"], rows)


def _critical_scan(cfg: dict) -> Report:
    a = cfg["a"]
    zc = solver.critical_charge(a)
    target = 3.8317059702075125**2 / (8.0 * a)
    grid = np.linspace(0.25, 2.0 * target, 24)
    values = solver.zero_energy_wall_values(a, grid)
    return Report("scan", {"kind": "critical-z", "a": a, "Z_c": zc, "Z_c_times_a": zc * a,
                           "v1_squared_over_8": target * a, "deviation": zc - target},
                  ["Z", "u_at_wall"], [[float(z), v] for z, v in zip(grid, values)])


def cmd_scan(cfg: dict) -> Report:
    kind = cfg["kind"]
    if kind not in SCAN_KINDS:
        raise ConfigError(f"--kind must be one of {', '.join(SCAN_KINDS)}")
    return {"epsilon": _epsilon_scan, "dimension": _dimension_scan,
            "critical-z": _critical_scan}[kind](cfg)


def _build_model(cfg: dict) -> models.RadialModel:
    name = cfg["model"] or "hydrogen"
    a, Z, n = cfg["a"], cfg["Z"], cfg["n"]
    D = _single_dimension(cfg)
    zc = 3.8317059702075125**2 / (8.0 * a)
    builders = {
        "hydrogen": lambda: models.hydrogen_ground_state(D, Z),
        "hydrogen-scaled": lambda: models.hydrogen_scaled(D, Z),
        "delta-1d": lambda: models.delta_1d(4.0 * Z),
        "well-regular": lambda: models.spherical_well_regular(n, a),
        "well-singular": lambda: models.spherical_well_singular(n, a),
        "hydrogen-in-well-regular": lambda: models.hydrogen_in_well(a, zc, Family.REGULAR),
        "hydrogen-in-well-singular": lambda: models.hydrogen_in_well(a, zc, Family.SINGULAR),
    }
    if name not in builders:
        raise ConfigError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")
    return builders[name]()


def cmd_model(cfg: dict) -> Report:
    """Closed-form data plus norm, <r>, the energy split and the cusp for one model."""
    model = _build_model(cfg)
    energy = quad.energy_report(model)
    summary = {
        "model": model.to_dict(),
        "norm": quad.norm(model).to_dict(),
        "mean_r": quad.expectation_r(model).to_dict(),
        "energy": energy.to_dict(),
        "cusp": diagnostics.cusp_check(model).to_dict(),
    }
    return Report("model", summary)


def cmd_reproduce(cfg: dict) -> Report:
    results = acceptance.run_all(cfg["tol"])
    rep = Report("reproduce", {"passed": sum(r.passed for r in results), "total": len(results)},
                 ["number", "name", "passed", "tolerance", "detail"],
                 [[r.number, r.name, r.passed, r.tolerance, r.detail] for r in results])
    rep.notes = [r.line() for r in results]
    rep.ok = all(r.passed for r in results)
    return rep


COMMANDS = {"spectrum": cmd_spectrum, "weakform": cmd_weakform, "classify": cmd_classify,
            "scan": cmd_scan, "reproduce": cmd_reproduce, "model": cmd_model}


# ------------------------------------------------------------- config/IO


def _dimensions(cfg: dict, default: Sequence[float]) -> list[float]:
    raw = cfg["D"]
    if raw is None:
        return list(default)
    try:
        dims = [float(x) for x in str(raw).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --D value {raw!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ConfigError("dimensions must be >= 1")
    return dims


def _single_dimension(cfg: dict) -> float:
    dims = _dimensions(cfg, (3.0,))
    if len(dims) != 1:
        raise ConfigError("this command takes a single --D value")
    return dims[0]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, help="well radius (bohr)")
    common.add_argument("--Z", type=float, help="nuclear charge")
    common.add_argument("--D", type=str, help="dimension, or comma list for dimension scans")
    common.add_argument("--n", type=int, help="quantum number")
    common.add_argument("--n-max", dest="n_max", type=int, help="highest state in a spectrum")
    common.add_argument("--family", choices=("regular", "singular", "both"))
    common.add_argument("--model", help="model selector")
    common.add_argument("--kappa", type=float, help="Debye-Hueckel screening constant")
    common.add_argument("--lb", type=float, help="Bjerrum length lambda_B")
    common.add_argument("--kind", choices=SCAN_KINDS, help="scan kind")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--output", help="directory for report and metadata files")
    common.add_argument("--config", help="JSON file with option values (flags take precedence)")

    parser = argparse.ArgumentParser(prog="radialab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "analytic vs numeric spectra of the hard-wall sphere",
        "weakform": "point-source coefficient of a selected function",
        "classify": "origin exponent, integrability and cusp table",
        "scan": "dimension, epsilon or critical-charge scans",
        "reproduce": "run every acceptance check",
        "model": "norm, <r>, energy split and cusp of one model",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Flags > JSON config file > defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update({k: (str(v) if k == "D" and v is not None else v) for k, v in loaded.items()})
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key in ("a", "Z", "kappa", "lb"):
        if not isinstance(cfg[key], (int, float)) or not cfg[key] > 0:
            raise ConfigError(f"{key} must be a positive number")
    for key in ("n", "n_max"):
        if not isinstance(cfg[key], int) or cfg[key] < 1:
            raise ConfigError(f"{key} must be a positive integer")
    if cfg["format"] not in ("json", "csv", "text"):
        raise ConfigError("format must be json, csv or text")
    if cfg["family"] not in ("regular", "singular", "both"):
        raise ConfigError("family must be regular, singular or both")
    if args.command == "weakform" and cfg["model"] not in (None,) + WEAKFORM_MODELS:
        raise ConfigError(f"weakform models: {', '.join(WEAKFORM_MODELS)}")
    if args.command == "scan" and cfg["kind"] == "epsilon" and cfg["model"] not in (None,) + EPSILON_MODELS:
        raise ConfigError(f"epsilon scan models: {', '.join(EPSILON_MODELS)}")
    if args.command == "model" and cfg["model"] not in (None,) + MODEL_NAMES:
        raise ConfigError(f"models: {', '.join(MODEL_NAMES)}")
    if args.command == "scan" and cfg["kind"] is None:
        raise ConfigError("scan needs --kind")
    return cfg


def write_outputs(report: Report, cfg: dict, command: str, elapsed: float) -> None:
    out = Path(cfg["output"])
    out.mkdir(parents=True, exist_ok=True)
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg["format"]]
    (out / f"{command}.{ext}").write_text(report.render(cfg["format"]))
    meta = {
        "command": command,
        "config": {k: v for k, v in cfg.items() if k != "output"},
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "elapsed_seconds": elapsed,
    }
    (out / f"{command}.metadata.json").write_text(json.dumps(_jsonable(meta), indent=2) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on bad usage, 0 on --help/--version
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    sys.stdout.write(report.render(cfg["format"]))
    if cfg["output"]:
        write_outputs(report, cfg, args.command, time.perf_counter() - start)
    return EXIT_OK if report.ok else EXIT_COMPUTATION


if __name__ == "__main__":
    raise SystemExit(main())
