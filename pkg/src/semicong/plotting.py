"""Figures written to files with the Agg backend: operation tables, congruence lattices, cone covers."""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .congruence import CongruenceLattice  # noqa: E402
from .flatness import GammaForm, homothetic_points  # noqa: E402
from .semiring import FiniteSemiring  # noqa: E402


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_semiring_tables(s: FiniteSemiring, path: str) -> str:
    """Side-by-side heatmaps of the addition and multiplication tables."""
    labels = [s.label(i) for i in range(s.size)]
    fig, axes = plt.subplots(1, 2, figsize=(2 + 0.9 * s.size, 1 + 0.5 * s.size))
    for ax, table, title in ((axes[0], s.add, "+"), (axes[1], s.mul, "×")):
        arr = np.array(table)
        ax.imshow(arr, cmap="viridis", vmin=0, vmax=max(s.size - 1, 1))
        ax.set_xticks(range(s.size), labels)
        ax.set_yticks(range(s.size), labels)
        ax.set_title(f"{s.name}  {title}")
        if s.size <= 12:
            for a in range(s.size):
                for b in range(s.size):
                    ax.text(b, a, labels[arr[a, b]], ha="center", va="center", color="w", fontsize=8)
    return _save(fig, path)


def plot_congruence_lattice(lattice: CongruenceLattice, path: str) -> str:
    """Hasse diagram, finer congruences lower; a node is labelled by its classes."""
    s = lattice.semiring
    parts = lattice.partitions()
    levels: dict[int, list[int]] = {}
    for i, p in enumerate(parts):
        levels.setdefault(p.num_classes, []).append(i)
    ranks = sorted(levels, reverse=True)
    pos = {}
    for y, k in enumerate(ranks):
        row = levels[k]
        for x, i in enumerate(row):
            pos[i] = (x - (len(row) - 1) / 2, y)
    width = max(len(r) for r in levels.values())
    fig, ax = plt.subplots(figsize=(max(4, 1.8 * width), 1.2 + 1.1 * len(ranks)))
    for i, j in lattice.cover_relations():
        (x0, y0), (x1, y1) = pos[i], pos[j]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=1, zorder=1)
    for i, (x, y) in pos.items():
        entry = lattice.entries[i]
        text = "|".join("".join(s.label(a) for a in c) for c in parts[i].classes())
        face = "#cfe3f7" if entry.principal else "#f7d4cf"
        ax.text(x, y, text, ha="center", va="center", fontsize=7, zorder=2,
                bbox=dict(boxstyle="round", fc=face, ec="0.4"))
    ax.set_title(f"congruences of {s.name} ({len(parts)}; red = not principal)")
    ax.set_xlim(-width / 2 - 0.5, width / 2 + 0.5)
    ax.set_ylim(-0.6, len(ranks) - 0.4)
    ax.axis("off")
    return _save(fig, path)


def plot_cover(g: GammaForm, start: Sequence[Sequence[int]], result: Sequence[Sequence[int]],
               targets: Sequence[Sequence[int]], path: str) -> str:
    """Homothetic projection x / (x . gamma) of the start and final collections and the targets.

    For n = 2 the projection is a segment, shown by its first coordinate;
    for n = 3 it is a triangle in the plane x . gamma = 1, shown in the first
    two coordinates.  The targets should sit inside the final simplex.
    """
    n = g.n
    if n not in (2, 3):
        raise ValueError("cone plots exist for n = 2 and n = 3")
    tg = [t for t in targets if any(t)]
    fig, ax = plt.subplots(figsize=(6, 4 if n == 2 else 6))
    if n == 2:
        for k, (coll, color, y) in enumerate(((start, "0.5", 1.0), (result, "C0", 0.0))):
            xs = sorted(p[0] for p in homothetic_points(g, coll))
            ax.plot(xs, [y, y], "-o", color=color, label=["start", "final"][k])
        focus = [p[0] for p in homothetic_points(g, list(start) + tg)]
        pad = 0.15 * (max(focus) - min(focus)) + 1e-3
        ax.set_xlim(min(focus) - pad, max(focus) + pad)
        if tg:
            ax.plot([p[0] for p in homothetic_points(g, tg)], [0.5] * len(tg), "x", color="C3", label="targets")
        ax.set_yticks([])
        ax.set_xlabel("first coordinate of x / (x . gamma)")
    else:
        for k, (coll, color) in enumerate(((start, "0.5"), (result, "C0"))):
            pts = np.array(homothetic_points(g, coll))
            tri = np.vstack([pts, pts[:1]])
            ax.plot(tri[:, 0], tri[:, 1], "-o", color=color, label=["start", "final"][k])
        focus = np.array(homothetic_points(g, list(start) + tg))
        if tg:
            pts = np.array(homothetic_points(g, tg))
            ax.plot(pts[:, 0], pts[:, 1], "x", color="C3", label="targets")
        # the final simplex can be huge; keep the start triangle and targets in view
        lo, hi = focus.min(axis=0), focus.max(axis=0)
        pad = 0.15 * max(hi - lo) + 1e-3
        ax.set_xlim(lo[0] - pad, hi[0] + pad)
        ax.set_ylim(lo[1] - pad, hi[1] + pad)
        ax.set_xlabel("x1 / (x . gamma)")
        ax.set_ylabel("x2 / (x . gamma)")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("homothetic projection of the cover")
    return _save(fig, path)
