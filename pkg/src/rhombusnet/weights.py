"""Orbit weight vectors and symmetric weight-matrix assembly.

A chain with m blocks carries 2m free edge weights, one per edge orbit
(orbit 2r = left side of block r, orbit 2r + 1 = right side).  The full
weight matrix puts w[orbit] on every edge of that orbit and fixes each
diagonal entry so the row sums to one; off-orbit entries stay zero.
Negative weights are legal.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .topology import ChainSpec, Topology, build_chain

BASELINE_SCHEMES = ("max-degree", "metropolis")


def optimal_weights(spec: ChainSpec | Sequence[int]) -> np.ndarray:
    """Closed-form fastest-averaging weights: both orbits of block i get 1/(n_i + 1)."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    return np.repeat([1.0 / (n + 1) for n in spec.orders], 2)


def check_orbit_weights(spec: ChainSpec, w: Sequence[float]) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (2 * spec.block_count,):
        raise ValueError(
            f"expected {2 * spec.block_count} orbit weights for {spec.to_text()}, got {w.shape}"
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("orbit weights must be finite")
    return w


def matrix_from_edge_weights(
    node_count: int, weighted_edges: Sequence[tuple[int, int, float]]
) -> np.ndarray:
    """Symmetric row-stochastic matrix with the given per-edge weights."""
    W = np.zeros((node_count, node_count))
    for i, j, wij in weighted_edges:
        W[i, j] = wij
        W[j, i] = wij
    off_row_sums = W.sum(axis=1) - np.diag(W)
    W[np.diag_indices(node_count)] = 1.0 - off_row_sums
    return W


def assemble(spec: ChainSpec | Sequence[int], w: Sequence[float]) -> np.ndarray:
    """Full weight matrix of the chain for the given orbit weights."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = check_orbit_weights(spec, w)
    t = build_chain(spec)
    return matrix_from_edge_weights(
        t.node_count,
        [(i, j, w[orbit]) for (i, j), orbit in zip(t.edges, t.orbits)],
    )


def baseline_matrix_from_edges(
    node_count: int, edges: Sequence[tuple[int, int]], scheme: str
) -> np.ndarray:
    """Standard comparison weights on an arbitrary graph.

    max-degree: every edge gets 1/(d_max + 1); metropolis: edge (i, j) gets
    1/(1 + max(d_i, d_j)).  Both are symmetric and row-stochastic by
    construction.
    """
    degree = np.zeros(node_count, dtype=int)
    for i, j in edges:
        degree[i] += 1
        degree[j] += 1
    if scheme == "max-degree":
        uniform = 1.0 / (degree.max() + 1.0)
        weighted = [(i, j, uniform) for i, j in edges]
    elif scheme == "metropolis":
        weighted = [(i, j, 1.0 / (1.0 + max(degree[i], degree[j]))) for i, j in edges]
    else:
        raise ValueError(f"unknown baseline scheme {scheme!r}")
    return matrix_from_edge_weights(node_count, weighted)


def baseline_weights(t: Topology, scheme: str) -> np.ndarray:
    """Baseline weight matrix on a chain topology (non-optimal comparison point)."""
    return baseline_matrix_from_edges(t.node_count, t.edges, scheme)


def orbit_weights_of_matrix(t: Topology, W: np.ndarray) -> np.ndarray:
    """Per-orbit edge weights read back off a matrix that is constant on orbits."""
    w = np.zeros(t.orbit_count)
    for (i, j), orbit in zip(t.edges, t.orbits):
        w[orbit] = W[i, j]
    return w


def matrix_to_csv(W: np.ndarray) -> str:
    """Row-major CSV at full precision (round-trippable decimal)."""
    return "\n".join(",".join(repr(float(x)) for x in row) for row in W) + "\n"


def matrix_to_json(W: np.ndarray) -> str:
    return json.dumps([[float(x) for x in row] for row in W])
