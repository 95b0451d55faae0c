"""Report figures rendered from PhaseStats: phase times, kernel times, and
the simple/non-simple polygon mix, one PNG each."""

from pathlib import Path

_BAR = "#4878a8"
_ACCENT = "#c44e52"


def _bar_figure(plt, names, values, ylabel, title):
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    bars = ax.bar(names, values, color=_BAR, width=0.6)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=11)
    ax.grid(axis="y", alpha=0.3, linewidth=0.5)
    ax.set_axisbelow(True)
    for rect, v in zip(bars, values):
        ax.annotate(f"{v:.4g}", (rect.get_x() + rect.get_width() / 2, rect.get_height()),
                    ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    return fig


def render_phase_report(stats, out_dir) -> list:
    """Write phase_times.png, label_kernels.png, polygon_mix.png into out_dir."""
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = f"mean of {stats.reps} reps" if stats.reps > 1 else "single run"
    written = []

    fig = _bar_figure(
        plt,
        ["label", "traversal", "reparation", "total"],
        [stats.label_seconds, stats.traversal_seconds,
         stats.reparation_seconds, stats.total_seconds],
        f"seconds ({reps})",
        f"Phase times, {stats.input_triangles} triangles",
    )
    path = out / "phase_times.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig = _bar_figure(
        plt,
        ["longest edge", "seeds", "frontiers"],
        [stats.label_max_seconds, stats.label_seed_seconds, stats.label_frontier_seconds],
        f"seconds ({reps})",
        "Label kernels",
    )
    path = out / "label_kernels.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.bar(["simple", "non-simple"],
           [stats.simple_after_traversal, stats.nonsimple_after_traversal],
           color=[_BAR, _ACCENT], width=0.55)
    ax.set_ylabel("polygons after traversal")
    ax.set_title("Polygon mix before repair", fontsize=11)
    ax.grid(axis="y", alpha=0.3, linewidth=0.5)
    ax.set_axisbelow(True)
    fig.tight_layout()
    path = out / "polygon_mix.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written
