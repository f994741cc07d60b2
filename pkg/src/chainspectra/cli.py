"""Command-line surface: deterministic CSV/JSON emission for every analysis.

Subcommands wrap the library modules over single configs or sweeps.
Flags mirror the dataclass field names; a flat JSON config file can
supply any of them, with explicit flags taking precedence.  Floats are
formatted with repr (shortest string that round-trips to the same
double) so identical inputs produce byte-identical outputs.

Exit codes: 0 success, 2 invalid flags/config, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .asymptotics import band_edge_match, classify_regime, inband_pattern
from .eigensolver import ChainConfig, full_spectrum
from .errors import ChainSpectraError
from .extensions import (
    Lattice2DConfig,
    TwoLayerConfig,
    lattice2d_band,
    lattice2d_spectrum,
    two_layer_spectrum,
)
from .modes import analyze
from .nonlinear import NonlinearConfig, branch_rows, continue_branch
from .semi_infinite import count_edge_states_semi, solve_semi_infinite


# --------------------------------------------------------------------------
# Plumbing
# --------------------------------------------------------------------------

def _threads() -> int:
    raw = os.environ.get("CHAINSPECTRA_THREADS", "")
    if raw.strip():
        return max(1, int(raw))
    return min(8, os.cpu_count() or 1)


def _native(value):
    """Numpy scalars to JSON-friendly natives."""
    # numpy scalars first: np.float64 subclasses float but reprs differently
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise TypeError(f"cannot serialize {type(value)!r}")


def _fmt(value) -> str:
    value = _native(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class _Emitter:
    """Incremental CSV/JSON writer for one output table."""

    def __init__(self, outdir: str, name: str, fields: list[str], fmt: str):
        os.makedirs(outdir, exist_ok=True)
        self.fields = fields
        self.fmt = fmt
        self.path = os.path.join(outdir, f"{name}.{fmt}")
        if fmt == "csv":
            self._fh = open(self.path, "w", newline="")
            self._writer = csv.writer(self._fh)
            self._writer.writerow(fields)
        else:
            self._rows = []

    def row(self, record: dict) -> None:
        if self.fmt == "csv":
            self._writer.writerow([_fmt(record.get(f)) for f in self.fields])
            self._fh.flush()
        else:
            self._rows.append({f: _native(record.get(f)) for f in self.fields})

    def close(self) -> None:
        if self.fmt == "csv":
            self._fh.close()
        else:
            with open(self.path, "w") as fh:
                json.dump(self._rows, fh, indent=1)
                fh.write("\n")


def _write_json(outdir: str, name: str, payload) -> str:
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{name}.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    return path


def _merge_params(ns, keys) -> dict:
    """Flag values override config-file values; both override defaults."""
    base = {}
    if getattr(ns, "config", None):
        with open(ns.config) as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise ValueError("config file must hold a flat JSON object")
    merged = {}
    for name, typ, default in keys:
        flag = getattr(ns, name, None)
        if flag is not None:
            merged[name] = typ(flag)
        elif name in base:
            merged[name] = typ(base[name])
        elif default is not None:
            merged[name] = default
        else:
            raise ValueError(f"missing required parameter: {name}")
    return merged


CHAIN_KEYS = (("n", int, None), ("k1", float, None), ("k2", float, None),
              ("k31", float, None), ("k32", float, None))


def _chain_config(ns) -> ChainConfig:
    return ChainConfig(**_merge_params(ns, CHAIN_KEYS))


def _axis(ns, name) -> np.ndarray:
    start = getattr(ns, f"{name}_start")
    stop = getattr(ns, f"{name}_stop")
    count = getattr(ns, f"{name}_count")
    if count < 1:
        raise ValueError(f"--{name}-count must be at least 1")
    return np.linspace(start, stop, count)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

SPECTRUM_FIELDS = ["index", "omega2", "omega", "in_band", "band", "a_re",
                   "a_im", "sigma", "theta", "eta", "xi", "label"]


def cmd_spectrum(ns) -> int:
    cfg = _chain_config(ns)
    cs = analyze(cfg)
    (ac_lo, ac_hi), (op_lo, op_hi) = cfg.bulk.band_intervals()
    table = _Emitter(ns.out, "spectrum", SPECTRUM_FIELDS, ns.format)
    for ma in cs.modes:
        w2 = ma.omega2
        band = ("Acoustic" if ac_lo <= w2 <= ac_hi
                else "Optical" if op_lo <= w2 <= op_hi else None)
        table.row({
            "index": ma.mode_index, "omega2": w2,
            "omega": math.sqrt(max(w2, 0.0)),
            "in_band": cfg.bulk.in_band(w2), "band": band,
            "a_re": ma.te.a.real, "a_im": ma.te.a.imag,
            "sigma": ma.te.sigma, "theta": ma.te.theta,
            "eta": None if ma.eta is None or not math.isfinite(ma.eta) else ma.eta,
            "xi": None if ma.xi is None or not math.isfinite(ma.xi) else ma.xi,
            "label": ma.label,
        })
    table.close()
    modes = _Emitter(ns.out, "modes", ["index", "site", "value"], ns.format)
    for j in range(cfg.size):
        u = cs.spectrum.mode(j)
        for site in range(cfg.size):
            modes.row({"index": j, "site": site, "value": float(u[site])})
    modes.close()
    return 0


def cmd_phase_diagram(ns) -> int:
    k1 = ns.k1
    k2_axis = _axis(ns, "k2")
    k31_axis = _axis(ns, "k31")
    k32_axis = (_axis(ns, "k32") if ns.k32_count is not None and
                ns.k32_start is not None else np.array([ns.k32]))
    points = [(float(k2), float(k31), float(k32))
              for k2 in k2_axis for k31 in k31_axis for k32 in k32_axis]

    def work(point):
        k2, k31, k32 = point
        cfg = ChainConfig(n=ns.n, k1=k1, k2=k2, k31=k31, k32=k32)
        return {
            "k2": k2, "k31": k31, "k32": k32,
            "count_semi": count_edge_states_semi(k1, k2, k31),
            "count_finite": analyze(cfg).out_of_band_count,
            "regime": classify_regime(cfg).tag,
        }

    table = _Emitter(ns.out, "phase",
                     ["k2", "k31", "k32", "count_semi", "count_finite",
                      "regime"], ns.format)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        for record in pool.map(work, points):
            table.row(record)
    table.close()
    return 0


def cmd_sweep_k32(ns) -> int:
    params = _merge_params(ns, (("n", int, None), ("k1", float, None),
                                ("k2", float, None), ("k31", float, None)))
    axis = _axis(ns, "k32")
    left_roots = solve_semi_infinite(params["k1"], params["k2"], params["k31"])
    left_w2 = next((r.omega2 for r in left_roots if r.location is not None),
                   None)

    def work(k32):
        cfg = ChainConfig(k32=float(k32), **params)
        cs = analyze(cfg)
        right_roots = solve_semi_infinite(cfg.k1, cfg.k2, float(k32))
        right_w2 = next(
            (r.omega2 for r in right_roots if r.location is not None), None)
        rows = []
        for ma in cs.modes:
            if cfg.bulk.in_band(ma.omega2):
                continue
            rows.append({
                "k32": float(k32), "mode_index": ma.mode_index,
                "omega2": ma.omega2, "label": ma.label,
                "predicted_left_omega2": left_w2,
                "predicted_right_omega2": right_w2,
            })
        if not rows:
            rows.append({"k32": float(k32), "mode_index": None,
                         "omega2": None, "label": None,
                         "predicted_left_omega2": left_w2,
                         "predicted_right_omega2": right_w2})
        return rows

    table = _Emitter(ns.out, "sweep_k32",
                     ["k32", "mode_index", "omega2", "label",
                      "predicted_left_omega2", "predicted_right_omega2"],
                     ns.format)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        for rows in pool.map(work, axis):
            for record in rows:
                table.row(record)
    table.close()
    return 0


BAND_EDGE_FIELDS = ["n", "a", "sigma", "omega2", "k32", "c1", "c2", "zeta",
                    "margin_regime", "k32_asymptotic", "predicted_sign"]


def cmd_band_edge(ns) -> int:
    params = _merge_params(ns, (("k1", float, None), ("k2", float, None),
                                ("k31", float, None)))
    if ns.a not in (1, -1) or ns.sigma not in (1, -1):
        raise ValueError("--a and --sigma must be 1 or -1")
    if ns.n_start is not None and ns.n_count is not None:
        sizes = np.unique(np.linspace(ns.n_start, ns.n_stop,
                                      ns.n_count).astype(int))
    elif ns.n is not None:
        sizes = [ns.n]
    else:
        raise ValueError("provide --n or an --n-start/--n-stop/--n-count sweep")
    table = _Emitter(ns.out, "band_edge", BAND_EDGE_FIELDS, ns.format)
    for n in sizes:
        match = band_edge_match(params["k1"], params["k2"], params["k31"],
                                int(n), ns.a, ns.sigma)
        table.row({
            "n": int(n), "a": match.a, "sigma": match.sigma,
            "omega2": match.omega2, "k32": match.k32, "c1": match.c1,
            "c2": match.c2,
            "zeta": None if math.isnan(match.zeta) else match.zeta,
            "margin_regime": match.margin_regime,
            "k32_asymptotic": (None if math.isnan(match.k32_asymptotic)
                               else match.k32_asymptotic),
            "predicted_sign": match.predicted_sign,
        })
    table.close()
    return 0


def cmd_inband(ns) -> int:
    cfg = _chain_config(ns)
    est = inband_pattern(cfg, ns.band, ns.edge, ns.k_max)
    exact = full_spectrum(cfg).omega2
    table = _Emitter(ns.out, "inband",
                     ["k", "pattern", "multiplier", "gamma", "delta_theta",
                      "tilde_theta", "omega2_estimate", "omega2_exact"],
                     ns.format)
    for i in range(len(est.omega2)):
        w2 = est.omega2[i]
        nearest = float(exact[np.argmin(np.abs(exact - w2))])
        table.row({
            "k": i + 1, "pattern": est.pattern,
            "multiplier": None if est.multiplier is None else est.multiplier[i],
            "gamma": est.gamma,
            "delta_theta": est.delta_theta[i],
            "tilde_theta": (None if est.tilde_theta is None
                            else est.tilde_theta[i]),
            "omega2_estimate": w2, "omega2_exact": nearest,
        })
    table.close()
    return 0


def cmd_continue(ns) -> int:
    chain = _chain_config(ns)
    ncfg = NonlinearConfig(chain=chain, b=ns.b, harmonics=ns.harmonics,
                           step=ns.step)
    if ns.seed_index is not None:
        seed = ns.seed_index
    else:
        w2 = full_spectrum(chain).omega2
        seed = int(np.argmax(w2 > 2 * max(chain.k1, chain.k2) + 1e-9))
    branch = continue_branch(ncfg, seed, (ns.amp_start, ns.amp_stop),
                             stop_omega2=ns.stop_omega2)
    table = _Emitter(ns.out, "branch",
                     ["arclength", "amplitude", "omega", "omega2", "energy",
                      "ipr", "residual"], ns.format)
    for record in branch_rows(branch):
        table.row(record)
    table.close()
    exit_event = None
    if branch.exit_event is not None:
        exit_event = {
            "edge_omega2": branch.exit_event.edge_omega2,
            "index": branch.exit_event.index,
            "direction": branch.exit_event.direction,
            "amplitude": branch.exit_event.amplitude,
        }
    _write_json(ns.out, "branch_meta", {
        "seed_mode": branch.seed_mode,
        "status": branch.status,
        "resonance_margin": branch.resonance_margin,
        "exit_event": exit_event,
    })
    return 0


TWO_LAYER_KEYS = (("n", int, None), ("k1", float, None), ("k2", float, None),
                  ("k5", float, None), ("k6", float, None),
                  ("k31", float, None), ("k32", float, None),
                  ("k41", float, None), ("k42", float, None))


def cmd_two_layer(ns) -> int:
    cfg = TwoLayerConfig(**_merge_params(ns, TWO_LAYER_KEYS))
    spec = two_layer_spectrum(cfg)
    table = _Emitter(ns.out, "two_layer",
                     ["index", "omega2", "band_tag", "edge_label"], ns.format)
    for j, w2 in enumerate(spec.omega2):
        table.row({"index": j, "omega2": float(w2),
                   "band_tag": spec.band_tags[j],
                   "edge_label": spec.edge_labels[j]})
    table.close()
    _write_json(ns.out, "two_layer_bands", {
        "pair1": [list(iv) for iv in spec.bands.pair1],
        "pair2": [list(iv) for iv in spec.bands.pair2],
    })
    return 0


LATTICE2D_KEYS = (("N", int, None), ("k1", float, None), ("k2", float, None),
                  ("k3", float, 0.0), ("k4", float, None),
                  ("k5", float, None), ("k6", float, None))


def cmd_lattice2d(ns) -> int:
    cfg = Lattice2DConfig(**_merge_params(ns, LATTICE2D_KEYS))
    window = None
    if ns.window_lo is not None or ns.window_hi is not None:
        if ns.window_lo is None or ns.window_hi is None:
            raise ValueError("provide both --window-lo and --window-hi")
        window = (ns.window_lo, ns.window_hi)
    spec = lattice2d_spectrum(cfg, window=window)
    table = _Emitter(ns.out, "lattice2d",
                     ["index", "omega2", "label", "in_band"], ns.format)
    for j, w2 in enumerate(spec.omega2):
        table.row({"index": j, "omega2": float(w2),
                   "label": spec.labels[j], "in_band": bool(spec.in_band[j])})
    table.close()

    if ns.dump_modes != "none":
        dump = _Emitter(ns.out, "lattice2d_modes",
                        ["index", "row", "col", "value"], ns.format)
        for j in range(len(spec.omega2)):
            if ns.dump_modes == "edge" and spec.labels[j] != "edge":
                continue
            grid = spec.mode_grid(j)
            for r in range(cfg.N):
                for c in range(cfg.N):
                    dump.row({"index": j, "row": r, "col": c,
                              "value": float(grid[r, c])})
        dump.close()

    band = lattice2d_band(cfg)
    _write_json(ns.out, "lattice2d_band", {
        "minus": list(band.minus), "plus": list(band.plus),
        "union": list(band.union),
    })
    return 0


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _common(sub) -> None:
    sub.add_argument("--config", help="flat JSON file supplying parameters")
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _chain_flags(sub) -> None:
    sub.add_argument("--n", type=int)
    sub.add_argument("--k1", type=float)
    sub.add_argument("--k2", type=float)
    sub.add_argument("--k31", type=float)
    sub.add_argument("--k32", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainspectra",
        description="Spectra and edge-state analysis of diatomic chains")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("spectrum", help="full spectrum + mode profiles")
    _common(sub)
    _chain_flags(sub)
    sub.set_defaults(func=cmd_spectrum)

    sub = subs.add_parser("phase-diagram",
                          help="edge-state counts over a (k2, k31) grid")
    _common(sub)
    sub.add_argument("--n", type=int, default=50)
    sub.add_argument("--k1", type=float, default=1.0)
    sub.add_argument("--k2-start", type=float, required=True)
    sub.add_argument("--k2-stop", type=float, required=True)
    sub.add_argument("--k2-count", type=int, required=True)
    sub.add_argument("--k31-start", type=float, required=True)
    sub.add_argument("--k31-stop", type=float, required=True)
    sub.add_argument("--k31-count", type=int, required=True)
    sub.add_argument("--k32", type=float, default=0.0)
    sub.add_argument("--k32-start", type=float)
    sub.add_argument("--k32-stop", type=float)
    sub.add_argument("--k32-count", type=int)
    sub.set_defaults(func=cmd_phase_diagram)

    sub = subs.add_parser("sweep-k32",
                          help="out-of-band frequencies vs right stiffness")
    _common(sub)
    sub.add_argument("--n", type=int)
    sub.add_argument("--k1", type=float)
    sub.add_argument("--k2", type=float)
    sub.add_argument("--k31", type=float)
    sub.add_argument("--k32-start", type=float, required=True)
    sub.add_argument("--k32-stop", type=float, required=True)
    sub.add_argument("--k32-count", type=int, required=True)
    sub.set_defaults(func=cmd_sweep_k32)

    sub = subs.add_parser("band-edge",
                          help="boundary stiffness placing a mode at a band edge")
    _common(sub)
    sub.add_argument("--k1", type=float)
    sub.add_argument("--k2", type=float)
    sub.add_argument("--k31", type=float)
    sub.add_argument("--a", type=int, default=-1)
    sub.add_argument("--sigma", type=int, default=1)
    sub.add_argument("--n", type=int)
    sub.add_argument("--n-start", type=int)
    sub.add_argument("--n-stop", type=int)
    sub.add_argument("--n-count", type=int)
    sub.set_defaults(func=cmd_band_edge)

    sub = subs.add_parser("inband",
                          help="near-band-edge in-band frequency ladder")
    _common(sub)
    _chain_flags(sub)
    sub.add_argument("--band", choices=("Acoustic", "Optical"),
                     default="Optical")
    sub.add_argument("--edge", choices=("Lower", "Upper"), default="Lower")
    sub.add_argument("--k-max", type=int, default=5)
    sub.set_defaults(func=cmd_inband)

    sub = subs.add_parser("continue",
                          help="nonlinear continuation of a linear mode")
    _common(sub)
    _chain_flags(sub)
    sub.add_argument("--b", type=float, default=1.0)
    sub.add_argument("--harmonics", type=int, default=7)
    sub.add_argument("--step", type=float, default=0.05)
    sub.add_argument("--seed-index", type=int)
    sub.add_argument("--amp-start", type=float, default=0.01)
    sub.add_argument("--amp-stop", type=float, default=1.0)
    sub.add_argument("--stop-omega2", type=float)
    sub.set_defaults(func=cmd_continue)

    sub = subs.add_parser("two-layer", help="two coupled diatomic chains")
    _common(sub)
    sub.add_argument("--n", type=int)
    sub.add_argument("--k1", type=float)
    sub.add_argument("--k2", type=float)
    sub.add_argument("--k5", type=float)
    sub.add_argument("--k6", type=float)
    sub.add_argument("--k31", type=float)
    sub.add_argument("--k32", type=float)
    sub.add_argument("--k41", type=float)
    sub.add_argument("--k42", type=float)
    sub.set_defaults(func=cmd_two_layer)

    sub = subs.add_parser("lattice2d", help="N x N diatomic lattice")
    _common(sub)
    sub.add_argument("--N", type=int)
    sub.add_argument("--k1", type=float)
    sub.add_argument("--k2", type=float)
    sub.add_argument("--k3", type=float)
    sub.add_argument("--k4", type=float)
    sub.add_argument("--k5", type=float)
    sub.add_argument("--k6", type=float)
    sub.add_argument("--window-lo", type=float)
    sub.add_argument("--window-hi", type=float)
    sub.add_argument("--dump-modes", choices=("edge", "all", "none"),
                     default="edge")
    sub.set_defaults(func=cmd_lattice2d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except ChainSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
