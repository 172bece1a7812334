"""PNG rendering of the OPRA capacity curves."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .tables import Record  # noqa: E402

_STYLE = {
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
    "figure.figsize": (5.5, 3.8),
    "savefig.dpi": 150,
}
_MARKERS = {1.0: "o", 2.0: "s", 3.0: "^"}


def plot_opra_curves(records: Iterable[Record], path: str | Path) -> Path:
    """Plot C_OPRA/B against mean SNR, one line per (variant, alpha).

    Closed-form values are drawn as lines and the oracle as hollow markers
    every fifth point, so disagreement between the two would be visible.
    """
    closed = defaultdict(list)
    oracle = defaultdict(list)
    for r in records:
        if r.quantity != "C_OPRA/B" or r.value is None:
            continue
        key = (r.model, r.alpha, r.eta_or_lambda)
        if r.method == "closed":
            closed[key].append((r.snr_db, r.value))
        elif r.method == "oracle":
            oracle[key].append((r.snr_db, r.value))
    path = Path(path)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for key in sorted(closed):
            model, alpha, shape = key
            xs, ys = zip(*sorted(closed[key]))
            dashed = model == "alpha-lambda-mu"
            symbol = "lambda" if dashed else "eta"
            line, = ax.plot(xs, ys, "--" if dashed else "-", lw=1.0,
                            label=f"alpha={alpha:g}, {symbol}={shape:g}")
            if key in oracle:
                ox, oy = zip(*sorted(oracle[key])[::5])
                ax.plot(ox, oy, _MARKERS.get(alpha, "o"), mfc="none", color=line.get_color(), ms=4)
        ax.set_xlabel("mean SNR (dB)")
        ax.set_ylabel("C_OPRA / B (bits/s/Hz)")
        ax.legend(loc="upper left", ncol=2, frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata={"Software": None})
        plt.close(fig)
    return path
