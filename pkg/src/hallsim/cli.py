"""Command line interface: simulate / quantize / diagnose.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
All floating output uses shortest round-trip decimal formatting, so
identical configurations produce byte-identical diagnostics and snapshots.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .config import (ConfigError, RunConfig, build_config, make_domain,
                     parse_config_text, parse_overrides)
from .diagnostics import DiagnosticsRecord, continuity_residual, record_state
from .domain import Domain, DomainError
from .dynamics import (Params, SimState, SolverError, advance, default_dt,
                       initialize_consistent)
from .fields import LinkField, SiteField
from .holonomy import insert_flux
from .initial import band_limited, gaussian_packet, rim_pair_state, uniform_state
from .quantization import single_valuedness_scan
from .snapshots import SnapshotError, check_grid, read_field, write_state


def _params(cfg: RunConfig, d: Domain) -> Params:
    dt = cfg.dt if cfg.dt > 0 else default_dt(d, cfg.mu, cfg.hbar)
    return Params(sigma_h=cfg.sigma_h, hbar=cfg.hbar, e=cfg.e, mu=cfg.mu,
                  dt=dt, solver_tol=cfg.solver_tol,
                  solver_maxiter=cfg.solver_maxiter)


def _initial_psi(cfg: RunConfig, d: Domain, p: Params) -> SiteField:
    if cfg.psi0 == "zero":
        return SiteField.zeros(d)
    if cfg.psi0 == "uniform":
        psi = uniform_state(d, cfg.psi0_norm)
    elif cfg.psi0 == "gaussian":
        center = cfg.psi0_center
        if center is None:
            center = ((d.nx - 1) * d.dx / 2.0, (d.ny - 1) * d.dx / 2.0)
        width = cfg.psi0_width if cfg.psi0_width > 0 else 4.0 * d.dx
        psi = gaussian_packet(d, center, width, cfg.psi0_k, cfg.psi0_norm)
    elif cfg.psi0 == "rim":
        psi = rim_pair_state(d, p, cfg.psi0_norm, band=cfg.rim_band)
    else:
        kind, nx, ny, dx, arr = read_field(cfg.psi0_file)
        if kind != "psi":
            raise ConfigError([f"psi0_file: {cfg.psi0_file} holds {kind!r}, not psi"])
        check_grid(cfg.psi0_file, kind, nx, ny, dx, d)
        psi = SiteField(np.where(d.active, arr, 0.0))
    if cfg.psi0_ecut > 0:
        psi = band_limited(psi, d, p, cfg.psi0_ecut, cfg.psi0_norm)
    return psi


def simulate_run(cfg: RunConfig):
    """Run one simulation; returns (domain, params, recorded states)."""
    d = make_domain(cfg)
    p = _params(cfg, d)
    psi0 = _initial_psi(cfg, d, p)
    if cfg.consistent_init:
        state = initialize_consistent(d, psi0, p)
    else:
        state = SimState(d, p, psi0, LinkField.zeros(d), 0.0)
    if cfg.flux != 0.0:
        if d.g == 0:
            raise ConfigError(["flux: domain has no hole to thread flux through"])
        state = SimState(d, p, state.psi, insert_flux(state.a, d, 0, cfg.flux), 0.0)

    records = [state.copy()]
    for step in range(1, cfg.steps + 1):
        try:
            state = advance(state)
        except SolverError as err:
            raise SolverError(f"step {step}: {err}") from err
        if step % cfg.record_every == 0:
            records.append(state.copy())
    return d, p, records


def records_to_rows(cfg: RunConfig, records) -> list:
    """DiagnosticsRecord per recorded state (continuity from neighbors)."""
    rows = []
    for i, s in enumerate(records):
        cont = None
        if 0 < i < len(records) - 1:
            cont = continuity_residual(records[i - 1], records[i + 1])
        rows.append(record_state(s, cfg.edge_k, cfg.rho_star, cfg.b_star,
                                 cfg.sigma_floor, continuity=cont))
    return rows


def _write_manifest(path, cfg: RunConfig, wall: float):
    with open(path, "w") as f:
        f.write(f"hallsim {__version__}\n")
        f.write(f"wall_time_s = {wall:.3f}\n")
        f.write("\n[config]\n")
        f.write(cfg.echo())


def cmd_simulate(cfg: RunConfig, outdir: str) -> int:
    t0 = time.monotonic()
    d, p, records = simulate_run(cfg)
    rows = records_to_rows(cfg, records)
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "diagnostics.csv")
    with open(csv_path, "w") as f:
        f.write(DiagnosticsRecord.header(d.g) + "\n")
        for row in rows:
            f.write(row.row() + "\n")
    write_state(outdir, "initial", records[0].psi, records[0].a, d)
    write_state(outdir, "final", records[-1].psi, records[-1].a, d)
    _write_manifest(os.path.join(outdir, "manifest.txt"), cfg,
                    time.monotonic() - t0)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def cmd_quantize(cfg: RunConfig, outdir: str, smin: float, smax: float,
                 sstep: float, tol: float) -> int:
    problems = []
    if sstep <= 0:
        problems.append(f"--sigma-step must be positive, got {sstep}")
    if smax < smin:
        problems.append(f"--sigma-max {smax} below --sigma-min {smin}")
    if not tol > 0:
        problems.append(f"--tol must be positive, got {tol}")
    if problems:
        raise ConfigError(problems)

    count = int(np.floor((smax - smin) / sstep + 1e-9)) + 1
    candidates = [smin + i * sstep for i in range(count)]
    warn = None
    if tol >= 1.0:
        # the scan itself requires tol in (0, 1); apply looser tolerances
        # here, with a warning (mismatches never exceed 2)
        if tol >= 2.0:
            warn = (f"warning: tol = {repr(float(tol))} admits every "
                    "candidate (mismatches never exceed 2)")
        else:
            warn = (f"warning: tol = {repr(float(tol))} is too loose to "
                    "separate integer from non-integer candidates")
        spec = single_valuedness_scan(candidates, l=1.0, hbar=cfg.hbar,
                                      tol=0.999999)
        flags = [m <= tol for m in spec.mismatches]
    else:
        spec = single_valuedness_scan(candidates, l=1.0, hbar=cfg.hbar, tol=tol)
        flags = [m <= tol for m in spec.mismatches]
    allowed = [s for s, ok in zip(spec.candidates, flags) if ok]
    spec_rows = zip(spec.candidates, spec.mismatches, flags)

    lines = []
    if warn:
        lines.append(warn)
    for s, m, ok in spec_rows:
        lines.append(f"{repr(float(s))}, {repr(float(m))}, {'allowed' if ok else 'rejected'}")
    nonneg = sorted(s for s in allowed if s >= 0)
    lines.append("allowed_set = {" + ", ".join(repr(float(s)) for s in nonneg) + "}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "spectrum.txt"), "w") as f:
            f.write(text)
    return 0


def cmd_diagnose(cfg: RunConfig, psi_path, a1_path, a2_path) -> int:
    d = make_domain(cfg)
    p = _params(cfg, d)

    psi = None
    if psi_path:
        kind, nx, ny, dx, arr = read_field(psi_path)
        if kind != "psi":
            raise SnapshotError(f"{psi_path}: holds {kind!r}, expected psi")
        check_grid(psi_path, kind, nx, ny, dx, d)
        psi = SiteField(np.where(d.active, arr, 0.0))
    a = None
    if (a1_path is None) != (a2_path is None):
        raise ConfigError(["diagnose: --a1 and --a2 must be given together"])
    if a1_path:
        parts = []
        for path, want in ((a1_path, "a1"), (a2_path, "a2")):
            kind, nx, ny, dx, arr = read_field(path)
            if kind != want:
                raise SnapshotError(f"{path}: holds {kind!r}, expected {want}")
            check_grid(path, kind, nx, ny, dx, d)
            parts.append(arr)
        a = LinkField(parts[0], parts[1])

    if psi is None and a is None:
        raise ConfigError(["diagnose: need --psi and/or --a1/--a2"])

    from .diagnostics import mean_curl, norm_total, pure_gauge_residual
    from .holonomy import wilson_loop

    print(DiagnosticsRecord.header(d.g))
    if psi is not None and a is not None:
        s = SimState(d, p, psi, a, 0.0)
        rec = record_state(s, cfg.edge_k, cfg.rho_star, cfg.b_star,
                           cfg.sigma_floor)
        print(rec.row())
        return 0

    # partial inputs: only the columns their fields support
    def fmt(v):
        return "NA" if v is None else repr(float(v))

    if a is not None:
        hol = [wilson_loop(a, loop, d, p, i).phase
               for i, loop in enumerate(d.generator_loops)]
        cells = ["0.0", "NA", "NA", "NA", "NA",
                 fmt(mean_curl(a, d)), "NA", "NA",
                 fmt(pure_gauge_residual(a, d))]
        cells += [fmt(h) for h in hol]
        cells.append("NA")
    else:
        s = SimState(d, p, psi, LinkField.zeros(d), 0.0)
        cells = ["0.0", fmt(norm_total(s)), "NA", "NA",
                 fmt(norm_total(s) / d.area), "NA", "NA", "NA", "NA"]
        cells += ["NA"] * d.g
        cells.append("NA")
    print(",".join(cells))
    return 0


def _load_config(args) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config) as f:
                text = f.read()
        except OSError as err:
            raise ConfigError([f"--config {args.config}: {err}"]) from err
        values.update(parse_config_text(text))
    values.update(parse_overrides(args.set or []))
    return build_config(values)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hallsim",
        description="Lattice simulator for a 2D electron field coupled to a "
                    "Chern-Simons gauge potential.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--out", default="", help="output directory")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (repeatable)")

    sp_sim = sub.add_parser("simulate", help="run the coupled evolution")
    common(sp_sim)

    sp_q = sub.add_parser("quantize", help="single-valuedness scan of sigma_H")
    common(sp_q)
    sp_q.add_argument("--sigma-min", type=float, default=0.0)
    sp_q.add_argument("--sigma-max", type=float, default=5.0)
    sp_q.add_argument("--sigma-step", type=float, default=0.25)
    sp_q.add_argument("--tol", type=float, default=1e-9)

    sp_d = sub.add_parser("diagnose", help="one diagnostics row for saved snapshots")
    common(sp_d)
    sp_d.add_argument("--psi", help="HSFIELD psi snapshot")
    sp_d.add_argument("--a1", help="HSFIELD a1 snapshot")
    sp_d.add_argument("--a2", help="HSFIELD a2 snapshot")

    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args)
        if args.command == "simulate":
            if not args.out:
                raise ConfigError(["simulate needs --out DIR"])
            return cmd_simulate(cfg, args.out)
        if args.command == "quantize":
            return cmd_quantize(cfg, args.out, args.sigma_min, args.sigma_max,
                                args.sigma_step, args.tol)
        return cmd_diagnose(cfg, args.psi, args.a1, args.a2)
    except ConfigError as err:
        for problem in err.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except (SolverError, SnapshotError, DomainError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
