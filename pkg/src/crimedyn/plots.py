"""Optional static SVG charts (requires matplotlib)."""
from __future__ import annotations

from pathlib import Path

import numpy as np


def _axes(title: str, ylabel: str):
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.set_xlabel("t (periods)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return fig, ax


def write_trajectory_svg(path, times: np.ndarray, states: np.ndarray,
                         title: str = "Compartment trajectories") -> None:
    fig, ax = _axes(title, "individuals")
    for idx, label in enumerate(("S", "I", "R")):
        ax.plot(times, states[:, idx], label=label)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    import matplotlib.pyplot as plt
    plt.close(fig)


def write_controls_svg(path, times: np.ndarray, controls: np.ndarray,
                       title: str = "Optimal controls") -> None:
    fig, ax = _axes(title, "effort level")
    for idx, label in enumerate(("u1", "u2", "u3")):
        ax.plot(times, controls[:, idx], label=label)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    import matplotlib.pyplot as plt
    plt.close(fig)
