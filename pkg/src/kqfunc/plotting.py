"""Timing figure for ``verify --figure-dir``.

matplotlib is imported lazily so the rest of the package never pays for it.
"""

from __future__ import annotations

import os


def write_timing_figure(report, path: str) -> str:
    """Horizontal bar chart of per-check wall time, green for pass, red for fail."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    checks = list(report.checks)
    names = [c.name if len(c.name) <= 60 else c.name[:57] + "..." for c in checks]
    seconds = [c.seconds for c in checks]
    colors = ["tab:green" if c.passed else "tab:red" for c in checks]

    height = max(2.0, 0.32 * len(checks) + 1.0)
    fig, ax = plt.subplots(figsize=(9, height))
    ypos = list(range(len(checks)))
    ax.barh(ypos, seconds, color=colors)
    ax.set_yticks(ypos)
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    status = "PASS" if report.passed else "FAIL"
    ax.set_title(f"verify {report.suite}: {status}, total {sum(seconds):.2f}s")
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
