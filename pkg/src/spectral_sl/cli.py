"""Command-line front end and the on-disk file formats.

Commands
--------
forward              potential.json -> spectral-data.json + spectrum-report.json
export-spectral-data potential.json -> spectral-data.json
spectrum             potential.json -> spectrum-report.json
inverse              spectral-data.json -> reconstruction.json
eval                 potential.json -> CSV curve of one solution

File formats (all JSON, floats serialised by Python's shortest round-trip
representation, so identical inputs give byte-identical outputs):

potential.json        {"beta": <float>, "q": [[re, im], ...]}
                      index i of "q" holds the harmonic q_{i+1}.
spectral-data.json    {"eigenvalues": [{"re","im","sector","multiplicity"}],
                       "samples": [{"re","im","c11":[re,im],"c12":[re,im]}],
                       "meta": {"beta_hint": <optional>, "n_max":, "A":}}
                      beta_hint is advisory; the inverse never reads it.
spectrum-report.json  {"eigenvalues": [{"re","im","sector","multiplicity",
                                        "coefficient_value":[re,im]}],
                       "singularities": [{"kind","n","re","im"}],
                       "continuous_spectrum": <descriptor string>}
reconstruction.json   {"beta": <float>, "q": [[re, im], ...],
                       "diagnostics": {...}}

Exit codes: 0 success, 1 schema error, 2 numerical error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .coeffs import FourierPotential, build_table
from .errors import SchemaError, SpectralError
from .inverse import (
    FALLBACK_DIRECTION,
    FALLBACK_RADII,
    SampledProvider,
    reconstruct,
    sampled_provider,
)
from .scattering import coefficient_evaluators
from .solutions import eval_f1, eval_f2, ode_residual
from .spectrum import SpectrumReport, EigenvalueHit, Singularity, scan_spectrum

#: Offsets of the sample cluster dropped around every far-field and
#: eigenvalue evaluation point; at least four land within the provider's
#: interpolation radius.
CLUSTER_OFFSETS = (
    0.0 + 0.0j,
    0.02 + 0.0j,
    0.0 + 0.02j,
    -0.02 + 0.0j,
    0.0 - 0.02j,
    0.015 + 0.015j,
)


@dataclass
class RunConfig:
    """Parsed command-line invocation."""

    command: str
    inputs: list = field(default_factory=list)
    order: int = 30
    n_max: int = 6
    tol: float = 1e-9
    out: str = "."
    seed: int = 0
    grid_step: float = 0.05
    grid_max: float = 6.0
    self_test: str | None = None

    def __post_init__(self):
        if self.n_max < 1 or self.order < self.n_max:
            raise SchemaError("require order >= n_max >= 1")
        if self.tol <= 0:
            raise SchemaError("tolerances must be positive")


# --- JSON helpers ----------------------------------------------------------


def _require(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def _as_pair(obj, what: str) -> complex:
    _require(
        isinstance(obj, (list, tuple))
        and len(obj) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj),
        f"{what} must be a [re, im] pair of numbers",
    )
    return complex(obj[0], obj[1])


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def _write_json(path, obj):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=True)
        fh.write("\n")
    os.replace(tmp, path)


def load_potential(path) -> FourierPotential:
    data = _load_json(path)
    _require(isinstance(data, dict), "potential file must hold a JSON object")
    _require(
        "beta" in data and isinstance(data["beta"], (int, float)) and not isinstance(data["beta"], bool),
        "potential file needs a numeric 'beta'",
    )
    _require("q" in data and isinstance(data["q"], list), "potential file needs a 'q' list")
    harmonics = [_as_pair(c, f"q[{i}]") for i, c in enumerate(data["q"])]
    try:
        return FourierPotential(beta=float(data["beta"]), q=tuple(harmonics))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def spectral_data_to_dict(eigenvalues, points, c11, c12, meta) -> dict:
    return {
        "eigenvalues": [
            {
                "re": lam.real,
                "im": lam.imag,
                "sector": int(sector),
                "multiplicity": int(mult),
            }
            for lam, sector, mult in eigenvalues
        ],
        "samples": [
            {
                "re": p.real,
                "im": p.imag,
                "c11": [a.real, a.imag],
                "c12": [b.real, b.imag],
            }
            for p, a, b in zip(points, c11, c12)
        ],
        "meta": meta,
    }


def load_spectral_data(path) -> dict:
    data = _load_json(path)
    _require(isinstance(data, dict), "spectral data must be a JSON object")
    for key in ("eigenvalues", "samples", "meta"):
        _require(key in data, f"spectral data is missing '{key}'")
    _require(isinstance(data["eigenvalues"], list), "'eigenvalues' must be a list")
    _require(isinstance(data["samples"], list), "'samples' must be a list")
    _require(isinstance(data["meta"], dict), "'meta' must be an object")
    for i, e in enumerate(data["eigenvalues"]):
        _require(isinstance(e, dict), f"eigenvalues[{i}] must be an object")
        for key in ("re", "im", "sector", "multiplicity"):
            _require(key in e, f"eigenvalues[{i}] is missing '{key}'")
        _require(
            isinstance(e["sector"], int) and 0 <= e["sector"] <= 3,
            f"eigenvalues[{i}].sector must be 0..3",
        )
    for i, s in enumerate(data["samples"]):
        _require(isinstance(s, dict), f"samples[{i}] must be an object")
        for key in ("re", "im", "c11", "c12"):
            _require(key in s, f"samples[{i}] is missing '{key}'")
        _as_pair(s["c11"], f"samples[{i}].c11")
        _as_pair(s["c12"], f"samples[{i}].c12")
    return data


def spectrum_report_to_dict(report: SpectrumReport) -> dict:
    return {
        "eigenvalues": [
            {
                "re": h.lam.real,
                "im": h.lam.imag,
                "sector": h.sector,
                "multiplicity": h.multiplicity,
                "coefficient_value": [
                    h.coefficient_value.real,
                    h.coefficient_value.imag,
                ],
            }
            for h in report.eigenvalues
        ],
        "singularities": [
            {"kind": s.kind, "n": s.n, "re": s.value.real, "im": s.value.imag}
            for s in report.singularities
        ],
        "continuous_spectrum": report.continuous_spectrum,
    }


def spectrum_report_from_dict(data: dict) -> SpectrumReport:
    _require(isinstance(data, dict), "spectrum report must be a JSON object")
    for key in ("eigenvalues", "singularities", "continuous_spectrum"):
        _require(key in data, f"spectrum report is missing '{key}'")
    eigenvalues = [
        EigenvalueHit(
            lam=complex(h["re"], h["im"]),
            sector=int(h["sector"]),
            multiplicity=int(h["multiplicity"]),
            coefficient_value=_as_pair(h["coefficient_value"], "coefficient_value"),
        )
        for h in data["eigenvalues"]
    ]
    singularities = [
        Singularity(kind=s["kind"], n=int(s["n"]), value=complex(s["re"], s["im"]))
        for s in data["singularities"]
    ]
    return SpectrumReport(
        eigenvalues=eigenvalues,
        singularities=singularities,
        continuous_spectrum=data["continuous_spectrum"],
    )


def reconstruction_to_dict(result) -> dict:
    return {
        "beta": result.beta,
        "q": [[c.real, c.imag] for c in result.q],
        "diagnostics": result.diagnostics,
    }


def load_reconstruction(path) -> dict:
    data = _load_json(path)
    _require(isinstance(data, dict), "reconstruction must be a JSON object")
    for key in ("beta", "q", "diagnostics"):
        _require(key in data, f"reconstruction is missing '{key}'")
    for i, c in enumerate(data["q"]):
        _as_pair(c, f"q[{i}]")
    return data


# --- sampling plan for exports ---------------------------------------------


def sample_points(config: RunConfig, eigenvalues) -> np.ndarray:
    """Deterministic evaluation grid for spectral-data exports.

    A raster over the first-quadrant rectangle, log-spaced spokes running
    into each real half-integer along the quadrant diagonal (they feed the
    pole-strength extraction), far-field clusters for the asymptotic beta
    path, and clusters at +/- every eigenvalue for the eigenvalue beta path.
    """
    pts: list = []
    axis = np.arange(0.1, config.grid_max + 1e-12, config.grid_step)
    for re in axis:
        for im in axis:
            pts.append(complex(re, im))
    spoke = np.logspace(-8, -1, 40)
    for n in range(1, config.n_max + 1):
        for d in spoke:
            pts.append(n / 2.0 + d * FALLBACK_DIRECTION)
    for r in FALLBACK_RADII:
        center = r * FALLBACK_DIRECTION
        for off in CLUSTER_OFFSETS:
            pts.append(center + off)
    for lam, _sector, _mult in eigenvalues:
        for center in (lam, -lam):
            for off in CLUSTER_OFFSETS:
                pts.append(center + off)
    return np.asarray(pts, dtype=complex)


def _forward_products(config: RunConfig, potential: FourierPotential):
    table = build_table(potential, config.order)
    report = scan_spectrum(
        table,
        potential.beta,
        n_max=config.n_max,
        tol=config.tol,
        seed=config.seed,
    )
    eigenvalues = [(h.lam, h.sector, h.multiplicity) for h in report.eigenvalues]
    points = sample_points(config, eigenvalues)
    c11_fn, c12_fn = coefficient_evaluators(table, potential.beta)
    c11 = c11_fn(points)
    c12 = c12_fn(points)
    meta = {"beta_hint": potential.beta, "n_max": config.n_max, "A": config.order}
    data = spectral_data_to_dict(eigenvalues, points, c11, c12, meta)
    return data, spectrum_report_to_dict(report)


# --- commands ---------------------------------------------------------------


def cmd_forward(config: RunConfig) -> int:
    potential = load_potential(config.inputs[0])
    data, report = _forward_products(config, potential)
    os.makedirs(config.out, exist_ok=True)
    _write_json(os.path.join(config.out, "spectral-data.json"), data)
    _write_json(os.path.join(config.out, "spectrum-report.json"), report)
    return 0


def cmd_export(config: RunConfig) -> int:
    potential = load_potential(config.inputs[0])
    data, _report = _forward_products(config, potential)
    os.makedirs(config.out, exist_ok=True)
    _write_json(os.path.join(config.out, "spectral-data.json"), data)
    return 0


def cmd_spectrum(config: RunConfig) -> int:
    potential = load_potential(config.inputs[0])
    table = build_table(potential, config.order)
    report = scan_spectrum(
        table, potential.beta, n_max=config.n_max, tol=config.tol, seed=config.seed
    )
    os.makedirs(config.out, exist_ok=True)
    _write_json(
        os.path.join(config.out, "spectrum-report.json"),
        spectrum_report_to_dict(report),
    )
    return 0


def cmd_inverse(config: RunConfig) -> int:
    if config.self_test:
        potential = load_potential(config.self_test)
        data, _report = _forward_products(config, potential)
        provider = SampledProvider(
            [complex(s["re"], s["im"]) for s in data["samples"]],
            [complex(*s["c11"]) for s in data["samples"]],
            [complex(*s["c12"]) for s in data["samples"]],
            [
                (complex(e["re"], e["im"]), e["sector"], e["multiplicity"])
                for e in data["eigenvalues"]
            ],
        )
        result = reconstruct(provider, n_max=config.n_max, order=config.order)
        errs = [abs(result.beta - potential.beta) / abs(potential.beta)]
        for n in range(1, config.n_max + 1):
            truth = potential.harmonic(n)
            got = result.q[n - 1]
            errs.append(abs(got - truth) / max(1.0, abs(truth)))
        print(f"self-test max relative error: {max(errs):.3e}")
        return 0
    provider = sampled_provider(config.inputs[0])
    meta_n = None
    try:
        meta_n = _load_json(config.inputs[0]).get("meta", {}).get("n_max")
    except SchemaError:
        pass
    n_max = int(meta_n) if meta_n else config.n_max
    result = reconstruct(provider, n_max=n_max, order=max(config.order, n_max))
    out = config.out if config.out.endswith(".json") else os.path.join(
        config.out, "reconstruction.json"
    )
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    _write_json(out, reconstruction_to_dict(result))
    return 0


def _parse_lambda(text: str) -> complex:
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise SchemaError(f"cannot parse --lambda value {text!r}") from exc


def _parse_range(text: str):
    parts = text.split(":")
    _require(len(parts) == 3, "--x-range must be lo:hi:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise SchemaError(f"cannot parse --x-range {text!r}") from exc
    _require(count >= 1, "--x-range count must be >= 1")
    return np.linspace(lo, hi, count)


def cmd_eval(config: RunConfig, lam: complex, x_range, which: str) -> int:
    potential = load_potential(config.inputs[0])
    table = build_table(potential, config.order)
    out = config.out if config.out.endswith(".csv") else os.path.join(
        config.out, "solution.csv"
    )
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    lines = ["x,re,im,d_re,d_im,ode_residual_abs"]
    branch = which[2]
    for x in x_range:
        if which.startswith("f1"):
            s = eval_f1(table, lam, float(x), branch)
        else:
            s = eval_f2(table, potential.beta, lam, float(x), branch)
        res = abs(ode_residual(potential, table, lam, float(x), which))
        lines.append(
            f"{float(x)!r},{s.value.real!r},{s.value.imag!r},"
            f"{s.derivative.real!r},{s.derivative.imag!r},{res!r}"
        )
    tmp = f"{out}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, out)
    return 0


# --- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-sl",
        description="forward and inverse spectral computations for the "
        "indefinite-density operator with exponential potential",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input JSON file")
        p.add_argument("-A", "--order", type=int, default=30, help="series truncation order")
        p.add_argument("--nmax", type=int, default=6, help="number of recovered harmonics / singular points")
        p.add_argument("--tol", type=float, default=1e-9, help="eigenvalue localisation tolerance")
        p.add_argument("--out", default=".", help="output directory or file")
        p.add_argument("--seed", type=int, default=0, help="seed for search jitter")

    p = sub.add_parser("forward", help="spectral data + spectrum report from a potential")
    common(p)
    p.add_argument("--grid-step", type=float, default=0.05, help="raster step of the sample grid")
    p.add_argument("--grid-max", type=float, default=6.0, help="raster extent of the sample grid")

    p = sub.add_parser("export-spectral-data", help="spectral data only")
    common(p)
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--grid-max", type=float, default=6.0)

    p = sub.add_parser("spectrum", help="spectrum report only")
    common(p)

    p = sub.add_parser("inverse", help="reconstruct (beta, q) from spectral data")
    common(p, needs_input=False)
    p.add_argument("input", nargs="?", help="spectral-data JSON file")
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--grid-max", type=float, default=6.0)
    p.add_argument("--self-test", help="potential file for an in-process forward+inverse round trip")

    p = sub.add_parser("eval", help="sample one solution on an x grid as CSV")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True, help="spectral parameter, e.g. 1+2i")
    p.add_argument("--x-range", required=True, help="lo:hi:count")
    p.add_argument(
        "--solution",
        required=True,
        choices=["f1+", "f1-", "f2+", "f2-"],
        help="which solution branch to sample",
    )

    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        inputs=[args.input] if getattr(args, "input", None) else [],
        order=args.order,
        n_max=args.nmax,
        tol=args.tol,
        out=args.out,
        seed=args.seed,
        grid_step=getattr(args, "grid_step", 0.05),
        grid_max=getattr(args, "grid_max", 6.0),
        self_test=getattr(args, "self_test", None),
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "forward":
            return cmd_forward(config)
        if args.command == "export-spectral-data":
            return cmd_export(config)
        if args.command == "spectrum":
            return cmd_spectrum(config)
        if args.command == "inverse":
            if not config.inputs and not config.self_test:
                raise SchemaError("inverse needs a data file or --self-test")
            return cmd_inverse(config)
        if args.command == "eval":
            return cmd_eval(
                config, _parse_lambda(args.lam), _parse_range(args.x_range), args.solution
            )
        raise SchemaError(f"unknown command {args.command!r}")
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except SpectralError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
