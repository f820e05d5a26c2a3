"""Seeded Fruchterman-Reingold layout with a repulsion multiplier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graphcore import Sociogram

__all__ = ["LayoutResult", "fr_layout"]

DEFAULT_REPULSION = 3.5
DEFAULT_ITERATIONS = 10
DEFAULT_CANVAS = (1000.0, 1000.0)
_CHUNK = 1024
_MIN_DIST = 1e-9


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    iterations_run: int
    seed: int
    repulsion_multiplier: float


def _initial_positions(n: int, seed: int, width: float, height: float) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform((0.0, 0.0), (width, height), size=(n, 2))


def _repulsion(pos: np.ndarray, k2: float) -> np.ndarray:
    """Sum over other vertices of k^2 / d along the separating unit vector."""
    n = len(pos)
    disp = np.zeros_like(pos)
    for start in range(0, n, _CHUNK):
        block = pos[start : start + _CHUNK]
        delta = block[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta**2).sum(axis=2))
        coincident = dist < _MIN_DIST
        dist = np.maximum(dist, _MIN_DIST)
        force = k2 / dist**2  # k^2/d times delta/d
        force[coincident] = 0.0
        disp[start : start + _CHUNK] = (delta * force[:, :, None]).sum(axis=1)
    return disp


def fr_layout(
    g: Sociogram,
    repulsion: float = DEFAULT_REPULSION,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    canvas: tuple[float, float] = DEFAULT_CANVAS,
    initial: Mapping[str, tuple[float, float]] | None = None,
) -> LayoutResult:
    """Force-directed layout on the undirected view of ``g``.

    Repulsion is ``repulsion * k^2 / d`` between every vertex pair,
    attraction ``d^2 / k`` along edges, with ``k = sqrt(area / |V|)``. Each
    step moves a vertex at most the current temperature, which cools linearly
    from a tenth of the canvas width to zero; positions are clamped to the
    canvas. Initial positions are uniform draws keyed by sorted vertex order,
    unless ``initial`` supplies them.
    """
    if repulsion <= 0:
        raise ValueError("repulsion must be positive")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    width, height = map(float, canvas)
    if width <= 0 or height <= 0:
        raise ValueError("canvas dimensions must be positive")

    verts = g.vertex_list
    n = len(verts)
    if n == 0:
        return LayoutResult({}, 0, seed, repulsion)
    if n == 1:
        return LayoutResult({verts[0]: (width / 2, height / 2)}, 0, seed, repulsion)

    pos = _initial_positions(n, seed, width, height)
    if initial is not None:
        for i, v in enumerate(verts):
            if v in initial:
                pos[i] = initial[v]

    index = {v: i for i, v in enumerate(verts)}
    arcs = sorted({(min(index[u], index[v]), max(index[u], index[v])) for u, v in g.arcs()})
    src = np.array([a for a, _ in arcs], dtype=np.intp)
    dst = np.array([b for _, b in arcs], dtype=np.intp)

    k = np.sqrt(width * height / n)
    k2 = repulsion * k * k
    t0 = width / 10.0
    for it in range(iterations):
        temperature = t0 * (1.0 - it / iterations)
        disp = _repulsion(pos, k2)
        if len(src):
            delta = pos[src] - pos[dst]
            dist = np.maximum(np.sqrt((delta**2).sum(axis=1)), _MIN_DIST)
            pull = delta * (dist / k)[:, None]  # d^2/k along delta/d
            np.subtract.at(disp, src, pull)
            np.add.at(disp, dst, pull)
        length = np.maximum(np.sqrt((disp**2).sum(axis=1)), _MIN_DIST)
        step = disp * (np.minimum(length, temperature) / length)[:, None]
        pos = pos + step
        np.clip(pos[:, 0], 0.0, width, out=pos[:, 0])
        np.clip(pos[:, 1], 0.0, height, out=pos[:, 1])

    return LayoutResult(
        {v: (float(pos[i, 0]), float(pos[i, 1])) for i, v in enumerate(verts)},
        iterations,
        seed,
        repulsion,
    )
