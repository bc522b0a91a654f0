"""File-only figure rendering for mission runs and bench reports.

Uses the Agg backend so it works headless; every function writes PNG
files into a directory and returns the paths.  Nothing here opens a
window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .benchlab import ReportRow
from .geodesy import LocalFrame
from .simulator import SimResult

_MECH_ORDER = ["LOCKED", "PIN_RETRACTING", "HOOK_FALLING", "TETHER_FREE"]


def save_mission_figures(
    result: SimResult, out_dir: str | Path, stem: str = "mission"
) -> list[Path]:
    """Render trajectory and timeline figures for one run."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = result.rows
    t = [r.t for r in rows]
    paths: list[Path] = []

    fig, ax = plt.subplots(figsize=(7, 6))
    ax.plot([r.asv_x for r in rows], [r.asv_y for r in rows],
            color="tab:blue", label="tow vehicle")
    ax.plot([r.auv_x for r in rows], [r.auv_y for r in rows],
            color="tab:orange", linestyle="--", label="towed vehicle")
    release = result.summary.release_time
    if release is not None:
        idx = next(i for i, r in enumerate(rows) if r.mech_state == "TETHER_FREE")
        ax.plot(rows[idx].auv_x, rows[idx].auv_y, "r*", markersize=12,
                label=f"release t={release:.1f} s")
    target = result.config.release.deploy_position
    if target is not None:
        local = LocalFrame(result.config.origin).to_local(target)
        circle = plt.Circle(
            (local.x, local.y), result.config.release.delta,
            fill=False, color="tab:green", label="deploy radius",
        )
        ax.add_patch(circle)
    ax.set_xlabel("x east [m]")
    ax.set_ylabel("y north [m]")
    ax.set_title("mission trajectory")
    ax.axis("equal")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    path = out_dir / f"{stem}_trajectory.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(path)

    fig, axes = plt.subplots(3, 1, figsize=(8, 7), sharex=True)
    axes[0].plot(t, [r.tension for r in rows], color="tab:blue")
    axes[0].set_ylabel("tension [N]")
    axes[1].step(t, [int(r.taut) for r in rows], where="post", color="tab:orange")
    axes[1].set_ylabel("taut")
    axes[1].set_yticks([0, 1])
    axes[2].step(
        t, [_MECH_ORDER.index(r.mech_state) for r in rows],
        where="post", color="tab:green",
    )
    axes[2].set_yticks(range(len(_MECH_ORDER)))
    axes[2].set_yticklabels(_MECH_ORDER, fontsize=7)
    axes[2].set_xlabel("t [s]")
    for ax in axes:
        if result.summary.deploy_time is not None:
            ax.axvline(result.summary.deploy_time, color="k",
                       linestyle=":", linewidth=1)
        if release is not None:
            ax.axvline(release, color="r", linestyle=":", linewidth=1)
        ax.grid(True, alpha=0.3)
    axes[0].set_title("towline and mechanism timeline")
    path = out_dir / f"{stem}_timeline.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(path)
    return paths


def save_bench_figure(
    rows: list[ReportRow], out_dir: str | Path, stem: str = "bench"
) -> list[Path]:
    """Render the angle consistency report as a grouped bar chart."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = [f"{r.rig}\n{r.quantity}" for r in rows]
    computed = [r.computed if r.computed is not None else 0.0 for r in rows]
    expected = [r.expected for r in rows]
    x = range(len(rows))

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([i - 0.2 for i in x], computed, width=0.4, label="computed",
           color=["tab:blue" if r.feasible else "lightgray" for r in rows])
    ax.bar([i + 0.2 for i in x], expected, width=0.4, label="published",
           color="tab:orange")
    for i, r in enumerate(rows):
        if not r.feasible:
            ax.text(i - 0.2, 1.0, "infeasible", rotation=90,
                    ha="center", va="bottom", fontsize=7)
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("tether angle [deg]")
    ax.set_title("bench angle consistency")
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    path = out_dir / f"{stem}_angles.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return [path]
