"""Command line entry point: ``hom sweep|panel|intensities|compare``.

Exit codes: 0 success, 1 configuration or usage error, 2 I/O error,
3 oracle deviation above threshold.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys

import numpy as np

from .config import ExperimentConfig, load_config
from .ensemble import apply_q_weight, correlation_sweep, mean_intensities, pair_traces, sample_spectrum
from .exceptions import ConfigError, DomainError
from .oracle import compare_models

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_DEVIATION = 0, 1, 2, 3
COMPARE_THRESHOLD = 1e-9
DEFAULT_TRACES = 64

# theta0 in degrees and Q for each panel of the figure; + branch of every +/-
PANELS = {
    "a": (90.0, 0.0),
    "b": (90.0, 0.0),
    "c": (0.0, 0.0),
    "d": (90.0, 0.5),
    "e": (45.0, 0.0),
    "f": (90.0, 1.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """17 significant digits, enough for any double to round-trip."""
    return format(float(x), ".17g")


def threads_from_env():
    raw = os.environ.get("HOM_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(f"HOM_THREADS must be a positive integer, got {raw!r}")
    return n


def build_ensemble(cfg: ExperimentConfig, workers=None):
    pairs = sample_spectrum(cfg.spectrum_config(), workers)
    return apply_q_weight(pairs, cfg.q, cfg.seed, workers)


def sweep_csv(cfg: ExperimentConfig, n_traces: int = 0, workers=None) -> str:
    p = cfg.model_params()
    pairs = build_ensemble(cfg, workers)
    tau = cfg.tau_grid()
    curve = correlation_sweep(pairs, tau, p, workers=workers)
    traces = pair_traces(pairs[:n_traces], tau, p) if n_traces > 0 else np.empty((0, len(tau)))

    out = io.StringIO()
    out.write(",".join(["tau", "delta_tau", "r_raw", "r_norm"] + [f"trace_{j}" for j in range(len(traces))]))
    out.write("\n")
    for k, t in enumerate(curve.tau_grid):
        row = [t, cfg.bandwidth * t, curve.r_raw[k], curve.r_norm[k]] + list(traces[:, k])
        out.write(",".join(fmt(v) for v in row))
        out.write("\n")
    return out.getvalue()


def intensities_csv(cfg: ExperimentConfig, workers=None) -> str:
    """Port intensities averaged over both path terms, the pairs, and the delay grid."""
    p = cfg.model_params()
    pairs = build_ensemble(cfg, workers)
    summaries = [mean_intensities(pairs, t, p) for t in cfg.tau_grid()]
    mean_ic = float(np.mean([s.mean_ic for s in summaries]))
    mean_id = float(np.mean([s.mean_id for s in summaries]))
    return f"mean_ic,mean_id\n{fmt(mean_ic)},{fmt(mean_id)}\n"


def compare_json(cfg: ExperimentConfig, workers=None):
    p = cfg.model_params()
    report = compare_models(build_ensemble(cfg, workers), cfg.tau_grid(), p, workers)
    body = json.dumps({
        "max_abs_dev": report.max_abs_dev,
        "rms_dev": report.rms_dev,
        "n_samples": report.n_samples,
        "convention": report.convention,
    })
    return body + "\n", report.max_abs_dev <= COMPARE_THRESHOLD


def panel_config(cfg: ExperimentConfig, panel: str) -> ExperimentConfig:
    if panel not in PANELS:
        raise UsageError(f"unknown panel {panel!r}, expected one of {', '.join(PANELS)}")
    theta_deg, q = PANELS[panel]
    return dataclasses.replace(cfg, theta0_deg=theta_deg, q=q, keep_traces=(panel == "b") or cfg.keep_traces)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hom", description="Coherence-model Hong-Ou-Mandel simulations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "sweep": "coincidence curve versus delay",
        "panel": "one panel of the reference figure",
        "intensities": "mean output-port intensities",
        "compare": "deviation from the two-photon amplitude oracle",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="key = value configuration file")
        sp.add_argument("--out", help="write here instead of stdout")
        if name in ("sweep", "panel"):
            sp.add_argument("--traces", type=int, default=DEFAULT_TRACES,
                            help="per-pair trace columns when traces are on (default %(default)s)")
        if name == "panel":
            sp.add_argument("--panel", required=True, help="panel letter a..f")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        workers = threads_from_env()
        cfg = load_config(args.config)
        status = EXIT_OK
        if args.command in ("sweep", "panel"):
            if args.traces < 0:
                raise UsageError("--traces must be >= 0")
            if args.command == "panel":
                cfg = panel_config(cfg, args.panel)
            n_traces = min(args.traces, cfg.n_pairs) if cfg.keep_traces else 0
            text = sweep_csv(cfg, n_traces, workers)
        elif args.command == "intensities":
            text = intensities_csv(cfg, workers)
        else:
            text, ok = compare_json(cfg, workers)
            status = EXIT_OK if ok else EXIT_DEVIATION
    except UsageError as exc:
        print(f"hom: usage error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, DomainError, UnicodeDecodeError) as exc:
        print(f"hom: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"hom: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"hom: {exc}", file=sys.stderr)
        return EXIT_IO
    if status == EXIT_DEVIATION:
        print(f"hom: oracle deviation exceeds {COMPARE_THRESHOLD:g}", file=sys.stderr)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
