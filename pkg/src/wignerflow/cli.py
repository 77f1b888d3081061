"""Configuration-driven runner.

Subcommands:
    run <config>     propagate and write snapshots, diagnostics, overlays
    batch <dir>      run every *.cfg in a directory, each to its own output dir
    verify <config>  run and check the conservation / oracle properties

Config files are UTF-8 key=value lines; '#' starts a comment. Unknown keys
are rejected with their line number. Exit codes: 0 success, 1 verification
failure, 2 configuration error, 3 numerical instability, 4 I/O error.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import math
import multiprocessing
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, gridio
from .classical import (apply_flow, characteristics_oracle, hamiltonian_reciprocal,
                        reciprocal_trajectory)
from .errors import (ConfigurationError, InstabilityError, NormalizationError,
                     StateConstructionError, WignerflowError)
from .grid import (PhaseState, QuadraticHamiltonian, Representation, gaussian_wigner,
                   make_grid)
from .propagator import PropagationPlan, propagate
from .representations import degenerate_partner, to_representation

_REPS = {"W": Representation.W, "B": Representation.B,
         "Z": Representation.Z, "A": Representation.A}
_COMPONENTS = ("real", "imag", "abs2")


@dataclass
class RunConfig:
    nx: int | None = None
    np: int | None = None
    x_min: float | None = None
    x_max: float | None = None
    p_min: float | None = None
    p_max: float | None = None
    mass: float = 1.0
    omega: float = 1.0
    inverted: bool = True
    a: float | None = None
    b: float | None = None
    c: float | None = None
    hbar: float = 1.0
    x0: float | None = None
    p0: float | None = None
    energy_label: float | None = None
    psi_file: str | None = None
    dt: float = 0.01
    t_final: float = 1.5
    snapshot_times: tuple = ()
    representations: tuple = ("W", "A")
    components: tuple = ("real", "imag", "abs2")
    incidence: str = "from_right"
    degenerate_pair: bool = False
    seed: int | None = None  # reserved; dynamics is deterministic
    # resolved pieces, filled by resolve()
    hamiltonian: QuadraticHamiltonian = field(init=False, default=None, repr=False)

    def resolve(self) -> None:
        if self.a is not None or self.b is not None or self.c is not None:
            self.hamiltonian = QuadraticHamiltonian(
                m=self.mass, a=self.a or 0.0, b=self.b or 0.0, c=self.c or 0.0)
        else:
            self.hamiltonian = QuadraticHamiltonian.oscillator(
                self.mass, self.omega, inverted=self.inverted)
        if self.psi_file is None and self.x0 is None and self.p0 is None:
            if self.energy_label is None:
                raise ConfigurationError(
                    "no initial state: give x0/p0, energy_label, or psi_file")
            e = self.energy_label
            if self.hamiltonian.c >= 0 or e >= 0:
                raise ConfigurationError(
                    "energy_label initial states need an inverted oscillator and E < 0")
            self.x0 = math.sqrt(-2.0 * e / (self.mass * self.hamiltonian.omega() ** 2))
            self.p0 = 0.0
        elif self.psi_file is None:
            self.x0 = self.x0 if self.x0 is not None else 0.0
            self.p0 = self.p0 if self.p0 is not None else 0.0
        energy = (self.hamiltonian.energy(self.x0, self.p0)
                  if self.psi_file is None else 0.0)
        wide = abs(energy) > 1.0
        if self.nx is None:
            self.nx = 1024 if wide else 512
        if self.np is None:
            self.np = self.nx
        half = 24.0 if wide else 16.0
        if self.x_min is None:
            self.x_min = -half
        if self.x_max is None:
            self.x_max = half
        if self.p_min is None:
            self.p_min = -half
        if self.p_max is None:
            self.p_max = half
        if not self.snapshot_times:
            self.snapshot_times = (0.0, self.t_final)
        for rep in self.representations:
            if rep not in _REPS:
                raise ConfigurationError(f"unknown representation {rep!r}")
        for comp in self.components:
            if comp not in _COMPONENTS:
                raise ConfigurationError(f"unknown component {comp!r}")
        if self.incidence not in ("from_right", "from_left"):
            raise ConfigurationError(f"unknown incidence {self.incidence!r}")

    def echo(self) -> str:
        h = self.hamiltonian
        lines = {
            "nx": self.nx, "np": self.np,
            "x_min": self.x_min, "x_max": self.x_max,
            "p_min": self.p_min, "p_max": self.p_max,
            "mass": h.m, "a": h.a, "b": h.b, "c": h.c,
            "hbar": self.hbar,
            "x0": self.x0, "p0": self.p0, "psi_file": self.psi_file,
            "dt": self.dt, "t_final": self.t_final,
            "snapshot_times": ",".join(f"{t:.17g}" for t in self.snapshot_times),
            "representations": ",".join(self.representations),
            "components": ",".join(self.components),
            "incidence": self.incidence,
            "degenerate_pair": self.degenerate_pair,
            "seed": self.seed,
        }
        return "".join(f"{k}={v}\n" for k, v in lines.items() if v is not None)


_PARSERS = {
    "nx": int, "np": int, "seed": int,
    "x_min": float, "x_max": float, "p_min": float, "p_max": float,
    "mass": float, "omega": float, "a": float, "b": float, "c": float,
    "hbar": float, "x0": float, "p0": float, "energy_label": float,
    "dt": float, "t_final": float,
    "psi_file": str, "incidence": str,
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_config(text: str) -> RunConfig:
    """Parse key=value lines into a validated, fully resolved RunConfig."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _PARSERS:
                setattr(cfg, key, _PARSERS[key](value))
            elif key in ("inverted", "degenerate_pair"):
                setattr(cfg, key, _parse_bool(value))
            elif key == "snapshot_times":
                cfg.snapshot_times = tuple(float(v) for v in value.split(","))
            elif key == "representations":
                cfg.representations = tuple(v.strip().upper() for v in value.split(","))
            elif key == "components":
                cfg.components = tuple(v.strip().lower() for v in value.split(","))
            else:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        except WignerflowError:
            raise
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: {exc}") from exc
    # nx/np must be validated before resolve picks defaults
    for name in ("nx", "np"):
        n = getattr(cfg, name)
        if n is not None and (n < 8 or (n & (n - 1)) != 0):
            raise ConfigurationError(f"{name}={n}: not a power of two >= 8")
    cfg.resolve()
    return cfg


def _load_psi(path: str, nx: int) -> np.ndarray:
    if path.endswith(".npy"):
        psi = np.load(path)
    else:
        cols = np.loadtxt(path)
        psi = cols[:, 0] + 1j * cols[:, 1] if cols.ndim == 2 else cols.astype(complex)
    if psi.shape != (nx,):
        raise ConfigurationError(f"psi from {path} has shape {psi.shape}, expected ({nx},)")
    return np.asarray(psi, dtype=np.complex128)


def build_initial_state(cfg: RunConfig) -> PhaseState:
    grid = make_grid(cfg.nx, cfg.np, (cfg.x_min, cfg.x_max), (cfg.p_min, cfg.p_max))
    if cfg.psi_file is not None:
        from .representations import blokhintsev_from_wavefunction
        b = blokhintsev_from_wavefunction(_load_psi(cfg.psi_file, cfg.nx), grid, cfg.hbar)
        return to_representation(b, Representation.W)
    return gaussian_wigner(grid, cfg.hamiltonian, (cfg.x0, cfg.p0), cfg.hbar)


def _component_array(values: np.ndarray, component: str) -> np.ndarray:
    if component == "real":
        return values.real
    if component == "imag":
        return values.imag
    return np.abs(values) ** 2


def _seed_ring(center, cov_diag, n=16):
    """Center plus n points on the one-sigma ellipse."""
    phis = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    sx, sp = np.sqrt(cov_diag[0]), np.sqrt(cov_diag[1])
    pts = [center]
    pts += [(center[0] + sx * np.cos(f), center[1] + sp * np.sin(f)) for f in phis]
    return pts


def _write_overlays(out_dir: str, cfg: RunConfig, state0: PhaseState, snapshots) -> None:
    h = cfg.hamiltonian
    cov, _ = analysis.covariance_and_uncertainty(state0)
    mx, mp = analysis.first_moments(state0)
    seeds = _seed_ring((mx, mp), (cov[0, 0], cov[1, 1]))
    emit_direct = "W" in cfg.representations
    emit_reciprocal = "A" in cfg.representations and h.c < 0
    if emit_direct:
        energy = analysis.mean_energy(state0, h)
        levels = sorted({energy, 0.0, -energy})
        lines = []
        for e in levels:
            lines += gridio.level_set_direct(e, h.m, h.omega() or 1.0,
                                             cfg.x_max, cfg.p_max)
        gridio.write_polylines(os.path.join(out_dir, "contour_direct.txt"), lines)
        for i, (snap, _rec) in enumerate(snapshots):
            dots = [apply_flow(h, snap.time, x, p) for x, p in seeds]
            gridio.write_points(os.path.join(out_dir, f"dots_direct_snap{i:03d}.txt"), dots)
    if emit_reciprocal:
        w = h.omega()
        s_lam = 1.0 / max(np.sqrt(cov[0, 0]), 1e-30)
        s_th = 1.0 / max(np.sqrt(cov[1, 1]), 1e-30)
        rseeds = _seed_ring((0.0, 0.0), (s_lam**2, s_th**2))
        lam_max = float(np.max(np.abs(state0.grid.lambda_values)))
        th_max = float(np.max(np.abs(state0.grid.theta_values)))
        e0 = hamiltonian_reciprocal(s_lam, 0.0, h.m, w)
        lines = []
        for e in sorted({e0, 0.0, -e0}):
            lines += gridio.level_set_reciprocal(e, h.m, w, lam_max, th_max)
        gridio.write_polylines(os.path.join(out_dir, "contour_reciprocal.txt"), lines)
        for i, (snap, _rec) in enumerate(snapshots):
            dots = [reciprocal_trajectory(l0, t0, h.m, w, snap.time).coords
                    for l0, t0 in rseeds]
            gridio.write_points(os.path.join(out_dir, f"dots_reciprocal_snap{i:03d}.txt"), dots)


def run(cfg: RunConfig, out_dir: str) -> int:
    """Execute a run and write all artifacts into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "config_resolved.txt"), "w", encoding="utf-8") as fh:
        fh.write(cfg.echo())
    state0 = build_initial_state(cfg)
    plan = PropagationPlan(cfg.hamiltonian, cfg.dt, cfg.t_final,
                           tuple(cfg.snapshot_times), cfg.hbar)
    snapshots = propagate(state0, plan, cfg.incidence)
    for i, (snap, _rec) in enumerate(snapshots):
        for rep_name in cfg.representations:
            rep = _REPS[rep_name]
            view = to_representation(snap, rep)
            comps = ("real",) if rep is Representation.W else cfg.components
            for comp in comps:
                meta = {"representation": rep_name, "component": comp,
                        "x_min": cfg.x_min, "x_max": cfg.x_max,
                        "p_min": cfg.p_min, "p_max": cfg.p_max,
                        "time": snap.time, "hbar": cfg.hbar}
                gridio.write_psgrid(
                    os.path.join(out_dir, f"snap{i:03d}_{rep_name}_{comp}.psgrid"),
                    _component_array(view.values, comp), meta)
    gridio.write_diagnostics_csv(os.path.join(out_dir, "diagnostics.csv"),
                                 [rec for _snap, rec in snapshots])
    _write_overlays(out_dir, cfg, state0, snapshots)
    if cfg.degenerate_pair:
        partner = degenerate_partner(state0)
        a_w = to_representation(state0, Representation.A).values
        a_p = to_representation(partner, Representation.A).values
        diff = a_p - np.conj(a_w)
        with open(os.path.join(out_dir, "degenerate_pair.txt"), "w", encoding="utf-8") as fh:
            fh.write(f"max_abs_difference={np.max(np.abs(diff)):.17g}\n")
            fh.write(f"l2_difference={np.sqrt(np.sum(np.abs(diff) ** 2)):.17g}\n")
    return 0


def verify(cfg: RunConfig, out_dir: str | None = None) -> int:
    """Run the acceptance-style property checks for one configuration."""
    state0 = build_initial_state(cfg)
    plan = PropagationPlan(cfg.hamiltonian, cfg.dt, cfg.t_final,
                           tuple(cfg.snapshot_times), cfg.hbar)
    snapshots = propagate(state0, plan, cfg.incidence)
    recs = [rec for _s, rec in snapshots]
    r0 = recs[0]
    failures = 0

    def check(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1

    check("norm", all(abs(r.norm - 1.0) <= 1e-8 for r in recs),
          f"max |norm-1| = {max(abs(r.norm - 1.0) for r in recs):.3g}")
    check("purity", all(abs(r.purity - 1.0) <= 1e-8 for r in recs),
          f"max |purity-1| = {max(abs(r.purity - 1.0) for r in recs):.3g}")
    e_drift = max(abs(r.energy - r0.energy) for r in recs)
    check("energy", e_drift <= 1e-4, f"max |<H>(t) - <H>(0)| = {e_drift:.3g}")
    hudson = min(r.min_value for r in recs)
    peak = max(float(np.max(s.values.real)) for s, _r in snapshots)
    check("hudson", hudson >= -1e-6 * peak, f"min W = {hudson:.3g}")
    if state0.profile is not None and cfg.hamiltonian.c != 0:
        worst = 0.0
        for snap, _rec in snapshots:
            oracle = characteristics_oracle(state0, cfg.hamiltonian, snap.time)
            num = np.linalg.norm(snap.values.real - oracle.values.real)
            den = np.linalg.norm(oracle.values.real)
            worst = max(worst, num / den)
        check("oracle", worst <= 1e-3, f"max relative L2 vs characteristics = {worst:.3g}")
    if cfg.hamiltonian.c < 0:
        drift = max(
            max(abs(r.weight_upper - r0.weight_upper), abs(r.weight_lower - r0.weight_lower),
                abs(r.weight_left - r0.weight_left), abs(r.weight_right - r0.weight_right),
                abs(r.transmitted - r0.transmitted), abs(r.reflected - r0.reflected))
            for r in recs)
        check("quadrants", drift <= 1e-3, f"max quadrant/T/R drift = {drift:.3g}")
        closure = max(
            abs(r.transmitted + r.reflected
                + (r.weight_left if cfg.incidence == "from_right" else r.weight_right)
                - r.norm) for r in recs)
        check("closure", closure <= 1e-9, f"max |T+R+leakage-norm| = {closure:.3g}")
    return 1 if failures else 0


def _batch_worker(args):
    path, out_dir = args
    with open(path, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    return run(cfg, out_dir)


def batch(config_dir: str, out_root: str) -> int:
    paths = sorted(os.path.join(config_dir, name) for name in os.listdir(config_dir)
                   if name.endswith(".cfg"))
    if not paths:
        raise ConfigurationError(f"no *.cfg files in {config_dir}")
    jobs = [(p, os.path.join(out_root, os.path.splitext(os.path.basename(p))[0]))
            for p in paths]
    # spawn: forking after the threading runtime has started is unsafe
    ctx = multiprocessing.get_context("spawn")
    with concurrent.futures.ProcessPoolExecutor(mp_context=ctx) as pool:
        codes = list(pool.map(_batch_worker, jobs))
    return max(codes)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wignerflow", description=__doc__)
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; dynamics is deterministic")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run").add_argument("config")
    sub.add_parser("batch").add_argument("config_dir")
    sub.add_parser("verify").add_argument("config")
    args = parser.parse_args(argv)
    try:
        if args.command == "batch":
            return batch(args.config_dir, args.out)
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 4
        cfg = parse_config(text)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.command == "run":
            return run(cfg, args.out)
        return verify(cfg, args.out)
    except (ConfigurationError, StateConstructionError, NormalizationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except InstabilityError as exc:
        print(f"numerical instability: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
