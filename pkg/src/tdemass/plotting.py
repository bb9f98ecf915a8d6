"""Optional figure rendering for the CLI report path.

Each function saves one PNG next to the delimited output.  Rendering is a
convenience on top of the CSV data and is not part of the verified surface;
any plotting tool can reproduce the same figures from the files alone.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams.update(
    {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 130,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 10,
    }
)


def save_density_plot(x, rho, path, t, x0=None):
    fig, ax = plt.subplots()
    ax.plot(x, rho, lw=1.5)
    ax.set_xlabel("x")
    ax.set_ylabel("probability density")
    title = f"density at t = {t:g}"
    if x0 is not None:
        title += f", packet centers +-{x0:g}"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_uncertainty_plot(ts, records, path, hbar=1.0):
    fig, ax = plt.subplots()
    ax.plot(ts, [r.dx for r in records], label=r"$\Delta x$")
    ax.plot(ts, [r.dp for r in records], label=r"$\Delta p$")
    ax.plot(ts, [r.product for r in records], label=r"$\Delta x\,\Delta p$", lw=2)
    ax.axhline(0.5 * hbar, color="k", ls=":", lw=1, label=r"$\hbar/2$")
    ax.set_xlabel("t")
    ax.legend()
    ax.set_title("uncertainties of the ground state")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_wigner_plot(grid, path):
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    vmax = float(np.max(np.abs(grid.values)))
    mesh = ax.pcolormesh(
        grid.x_axis,
        grid.p_axis,
        grid.values.T,
        cmap="RdBu_r",
        vmin=-vmax,
        vmax=vmax,
        shading="auto",
    )
    fig.colorbar(mesh, ax=ax, label="W(x, p)")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_title(f"Wigner distribution at t = {grid.t:g} ({grid.meta.get('method')})")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_eigenstate_plot(x, values, path, n, t):
    fig, ax = plt.subplots()
    ax.plot(x, values.real, label="Re")
    ax.plot(x, values.imag, label="Im")
    ax.plot(x, np.abs(values) ** 2, label=r"$|\phi|^2$", lw=2)
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title(f"eigenstate n = {n} at t = {t:g}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_phases_plot(ts, triples, path, n):
    fig, ax = plt.subplots()
    ax.plot(ts, [p.theta_d for p in triples], label=r"$\theta^d$")
    ax.plot(ts, [p.theta_g.real for p in triples], label=r"Re $\theta^g$")
    ax.plot(ts, [p.theta_g.imag for p in triples], label=r"Im $\theta^g$")
    ax.plot(ts, [p.theta_total.real for p in triples], label=r"Re $\theta$", lw=2)
    ax.set_xlabel("t")
    ax.legend()
    ax.set_title(f"phases of mode n = {n}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
