"""Command-line front end.

Subcommands emit figure-reproduction data as CSV (fixed ``%.12e`` formatting,
fixed row order, so repeated runs are byte-identical) plus a JSON metadata
sidecar; ``--plot`` additionally renders a PNG next to each CSV. ``verify``
runs the full oracle battery and exits nonzero if any check fails.

Exit codes: 0 success, 1 verification failure, 2 usage/config error.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from .config import ConfigError, RunConfig, resolve_config
from .errors import TdemassError
from .observables import uncertainty_at
from .states import eigenstate, full_solution, phase_series
from .verify import MUTATIONS, run_battery
from .wigner import cat_state, density, wigner_grid


def _fmt(value: float) -> str:
    return "%.12e" % value


def _parse_grid(spec: str, name: str = "grid"):
    parts = spec.split(":") if spec else []
    if len(parts) != 3:
        raise click.UsageError(f"{name} must look like MIN:MAX:POINTS, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise click.UsageError(f"cannot parse {name} {spec!r}: {exc}") from exc
    if n < 2:
        raise click.UsageError(f"{name} needs at least 2 points, got {n}")
    if not hi > lo:
        raise click.UsageError(f"{name} needs MAX > MIN, got {spec!r}")
    return lo, hi, n


def _write_rows(path: Path, header, rows, meta: dict, fmt: str) -> None:
    """One table -> CSV + .json sidecar, or a single JSON document."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        doc = {"meta": meta, "columns": list(header), "data": [list(map(float, r)) for r in rows]}
        path.with_suffix(".json").write_text(
            json.dumps(doc, sort_keys=True, indent=2) + "\n"
        )
        return
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    sidecar = path.with_suffix(".meta.json")
    sidecar.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def _config_meta(cfg: RunConfig) -> dict:
    return {
        "preset": cfg.preset,
        "mass": cfg.mass,
        "invariant": cfg.invariant,
        "x0": cfg.x0,
        "normalize": cfg.normalize,
    }


def _out_path(cfg: RunConfig, default: str) -> Path:
    return Path(cfg.out) if cfg.out else Path(default)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="JSON run configuration.")
@click.option("--preset", default=None, help="Built-in parameter set, e.g. 'paper-toy'.")
@click.option("--out", default=None, type=click.Path(), help="Output path (base name for multi-file commands).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              help="csv writes data + .meta.json sidecar; json writes one document.")
@click.pass_context
def main(ctx, config_path, preset, out, fmt):
    """Invariant-based dynamics of a free particle with time-dependent mass."""
    try:
        cfg = resolve_config(config_path=config_path, preset=preset)
    except (ConfigError, TdemassError) as exc:
        raise click.UsageError(str(exc)) from exc
    cfg.out = out
    cfg.format = fmt
    ctx.obj = cfg


def _build(cfg: RunConfig):
    try:
        return cfg.build_params(), cfg.build_profile()
    except (ConfigError, TdemassError) as exc:
        raise click.UsageError(str(exc)) from exc


@main.command("density")
@click.option("--t", "t", type=float, default=0.0, show_default=True)
@click.option("--x0", type=float, default=None,
              help="Packet half-separation; omit for the single ground-state packet.")
@click.option("--grid", default="-8:8:401", show_default=True, help="x samples MIN:MAX:POINTS.")
@click.option("--plot", is_flag=True, help="Render a PNG next to the output.")
@click.pass_obj
def density_cmd(cfg, t, x0, grid, plot):
    """Probability density of the ground state or of the two-packet state."""
    params, profile = _build(cfg)
    lo, hi, n = _parse_grid(grid)
    x = np.linspace(lo, hi, n)
    if x0 is None:
        psi = full_solution(params, profile, t, 0, normalize=cfg.normalize)
        rho = np.abs(psi(x)) ** 2
    else:
        cat = cat_state(params, profile, t, x0, normalize=cfg.normalize)
        rho = density(cat, x)
    meta = _config_meta(cfg) | {"t": t, "density_x0": x0, "grid": [lo, hi, n]}
    path = _out_path(cfg, "density.csv")
    _write_rows(path, ["x", "rho"], list(zip(x, rho)), meta, cfg.format)
    if plot:
        from .plotting import save_density_plot

        save_density_plot(x, rho, path.with_suffix(".png"), t, x0=x0)
    click.echo(f"wrote {path}")


@main.command("uncertainty")
@click.option("--t0", type=float, default=0.0, show_default=True)
@click.option("--t1", type=float, default=20.0, show_default=True)
@click.option("--steps", type=int, default=400, show_default=True)
@click.option("--plot", is_flag=True)
@click.pass_obj
def uncertainty_cmd(cfg, t0, t1, steps, plot):
    """Time series of Delta-x, Delta-p, their product, and the ellipse axes."""
    if steps < 2:
        raise click.UsageError(f"need steps >= 2, got {steps}")
    if not t1 > t0 >= 0:
        raise click.UsageError(f"need t1 > t0 >= 0, got t0={t0}, t1={t1}")
    params, profile = _build(cfg)
    ts = np.linspace(t0, t1, steps)
    records = [uncertainty_at(params, profile, t) for t in ts]
    rows = [(r.t, r.dx, r.dp, r.product, r.s1_sq, r.s2_sq) for r in records]
    meta = _config_meta(cfg) | {"t0": t0, "t1": t1, "steps": steps}
    path = _out_path(cfg, "uncertainty.csv")
    _write_rows(path, ["t", "dx", "dp", "product", "s1sq", "s2sq"], rows, meta, cfg.format)
    if plot:
        from .plotting import save_uncertainty_plot

        save_uncertainty_plot(ts, records, path.with_suffix(".png"), hbar=params.hbar)
    click.echo(f"wrote {path}")


@main.command("wigner")
@click.option("--t", "t_list", type=float, multiple=True,
              help="Evaluation time; repeat for several grids.")
@click.option("--x0", type=float, default=None, help="Packet half-separation (default from config).")
@click.option("--x", "x_grid", default="-8:8:161", show_default=True)
@click.option("--p", "p_grid", default="-4:4:161", show_default=True)
@click.option("--method", type=click.Choice(["closed", "numeric"]), default="closed", show_default=True)
@click.option("--plot", is_flag=True)
@click.pass_obj
def wigner_cmd(cfg, t_list, x0, x_grid, p_grid, method, plot):
    """Wigner distribution of the two-packet state, one CSV per time."""
    if not t_list:
        raise click.UsageError("pass at least one --t")
    params, profile = _build(cfg)
    x0 = cfg.x0 if x0 is None else x0
    xlo, xhi, nx = _parse_grid(x_grid, "--x")
    plo, phi, n_p = _parse_grid(p_grid, "--p")
    base = _out_path(cfg, "wigner.csv")
    for t in t_list:
        cat = cat_state(params, profile, t, x0, normalize=cfg.normalize)
        grid = wigner_grid(cat, (xlo, xhi), (plo, phi), nx, n_p, method=method)
        rows = [
            (xv, pv, grid.values[i, j])
            for i, xv in enumerate(grid.x_axis)
            for j, pv in enumerate(grid.p_axis)
        ]
        path = base if len(t_list) == 1 else base.with_name(f"{base.stem}_t{t:g}{base.suffix}")
        meta = _config_meta(cfg) | grid.meta
        _write_rows(path, ["x", "p", "w"], rows, meta, cfg.format)
        if plot:
            from .plotting import save_wigner_plot

            save_wigner_plot(grid, path.with_suffix(".png"))
        click.echo(f"wrote {path}")


@main.command("eigenstate")
@click.option("--n", type=int, default=0, show_default=True)
@click.option("--t", type=float, default=0.0, show_default=True)
@click.option("--grid", required=True, help="x samples MIN:MAX:POINTS.")
@click.option("--plot", is_flag=True)
@click.pass_obj
def eigenstate_cmd(cfg, n, t, grid, plot):
    """Samples of the invariant eigenstate phi_n at time t."""
    params, profile = _build(cfg)
    lo, hi, npts = _parse_grid(grid)
    x = np.linspace(lo, hi, npts)
    try:
        packet = eigenstate(params, profile, t, n)
    except (ValueError, TdemassError) as exc:
        raise click.UsageError(str(exc)) from exc
    values = packet(x)
    rows = list(zip(x, values.real, values.imag, np.abs(values) ** 2))
    meta = _config_meta(cfg) | {"n": n, "t": t, "grid": [lo, hi, npts]}
    path = _out_path(cfg, "eigenstate.csv")
    _write_rows(path, ["x", "re", "im", "abs2"], rows, meta, cfg.format)
    if plot:
        from .plotting import save_eigenstate_plot

        save_eigenstate_plot(x, values, path.with_suffix(".png"), n, t)
    click.echo(f"wrote {path}")


@main.command("phases")
@click.option("--n", type=int, default=0, show_default=True)
@click.option("--t0", type=float, default=0.0, show_default=True)
@click.option("--t1", type=float, default=20.0, show_default=True)
@click.option("--steps", type=int, default=400, show_default=True)
@click.option("--plot", is_flag=True)
@click.pass_obj
def phases_cmd(cfg, n, t0, t1, steps, plot):
    """Dynamical, geometric (Re and Im), and total phase of mode n over time."""
    if steps < 2:
        raise click.UsageError(f"need steps >= 2, got {steps}")
    if not t1 > t0 >= 0:
        raise click.UsageError(f"need t1 > t0 >= 0, got t0={t0}, t1={t1}")
    params, profile = _build(cfg)
    ts = np.linspace(t0, t1, steps)
    triples = phase_series(params, profile, ts, n)
    rows = [
        (t, p.theta_d, p.theta_g.real, p.theta_g.imag, p.theta_total.real, p.theta_total.imag)
        for t, p in zip(ts, triples)
    ]
    meta = _config_meta(cfg) | {"n": n, "t0": t0, "t1": t1, "steps": steps}
    path = _out_path(cfg, "phases.csv")
    _write_rows(
        path,
        ["t", "theta_d", "theta_g_re", "theta_g_im", "theta_total_re", "theta_total_im"],
        rows,
        meta,
        cfg.format,
    )
    if plot:
        from .plotting import save_phases_plot

        save_phases_plot(ts, triples, path.with_suffix(".png"), n)
    click.echo(f"wrote {path}")


@main.command("verify")
@click.option("--mutate", type=click.Choice(MUTATIONS), default=None, hidden=True,
              help="Deliberately corrupt one construction (negative control).")
@click.pass_obj
def verify_cmd(cfg, mutate):
    """Run the full oracle battery; exit 0 only if every check passes."""
    params, profile = _build(cfg)
    report = run_battery(params, profile, x0=cfg.x0, mutate=mutate)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text)
    else:
        click.echo(text, nl=False)
    for name, item in report.items():
        if isinstance(item, dict):
            status = "PASS" if item["pass"] else "FAIL"
            click.echo(
                f"{name}: {status} (value={item['value']:.3e}, "
                f"threshold {item['comparison']} {item['threshold']:.3e})",
                err=True,
            )
    if not report["all_pass"]:
        failing = [k for k, v in report.items() if isinstance(v, dict) and not v["pass"]]
        click.echo(f"FAILED checks: {', '.join(failing)}", err=True)
        sys.exit(1)
    click.echo("all checks passed", err=True)


if __name__ == "__main__":
    main()
