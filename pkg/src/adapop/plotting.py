"""Static SVG figures for experiment grids and tail checks.

Rendering is headless and byte-deterministic: the Agg backend, a fixed hash
salt for SVG element ids, and no embedded creation date, so re-running a
bench on the same inputs reproduces identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "adapop"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

_DETERMINISTIC_METADATA = {"Date": None}

_SCHEME_LABELS = {
    "a": "reset on success (A)",
    "b": "halve on success (B)",
    "jdw": "divide by successes",
    "additive": "increment on failure",
    "nonoblivious": "size 1/s of level",
    "constant": "constant size",
}

# bound drawn next to each scheme's empirical means, per counter kind
_BOUND_FOR = {
    ("a", "par"): "par_A",
    ("a", "seq"): "seq_A",
    ("b", "par"): "par_B",
    ("b", "seq"): "seq_B",
    ("nonoblivious", "par"): "par_no",
    ("nonoblivious", "seq"): "seq_no",
}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata=_DETERMINISTIC_METADATA)
    plt.close(fig)


def plot_mean_vs_n(summaries, path, title: str = "") -> None:
    """Log-log means of both time counters against n, bounds dashed alongside.

    ``summaries`` is the cell list of one experiment grid; cells are grouped
    by scheme, and a scheme's proven bound curve is drawn whenever one
    applies to it.
    """
    schemes = []
    for cell in summaries:
        if cell.scheme not in schemes:
            schemes.append(cell.scheme)
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for ax, counter, stat_name in ((axes[0], "par", "t_par"), (axes[1], "seq", "t_seq")):
        for scheme in schemes:
            cells = [c for c in summaries if c.scheme == scheme]
            ns = [c.n for c in cells]
            means = [getattr(c, stat_name)["mean"] for c in cells]
            label = _SCHEME_LABELS.get(scheme, scheme)
            ax.plot(ns, means, marker="o", label=label)
            bound_name = _BOUND_FOR.get((scheme, counter))
            if bound_name is not None:
                bound_vals = [c.bounds.get(bound_name) for c in cells]
                if all(v is not None for v in bound_vals):
                    ax.plot(ns, bound_vals, linestyle="--",
                            label=f"{label}, bound")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("mean generations" if counter == "par" else "mean evaluations")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, path)


def plot_tailcheck(result: dict, path) -> None:
    """Empirical tail exceedances against their proven bounds, one panel per tail."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for ax, side, name in ((axes[0], "upper", "late finish"), (axes[1], "lower", "early finish")):
        entries = result[side]
        alphas = [e["alpha"] for e in entries]
        ax.plot(alphas, [e["bound"] for e in entries], linestyle="--", marker="s",
                label="bound")
        ax.plot(alphas, [e["empirical"] for e in entries], marker="o",
                label="observed")
        ax.set_yscale("log")
        ax.set_xlabel("alpha")
        ax.set_ylabel("exceedance probability")
        ax.set_title(f"{name} tail")
        ax.set_xticks(alphas)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
    fig.suptitle(f"doubling race, p={result['p']:g}, start 2^{result['k']}, "
                 f"{result['trials']} trials")
    fig.tight_layout()
    _save(fig, path)
