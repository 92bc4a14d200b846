"""Synchronous distributed averaging and empirical convergence measurement.

iterate() runs the update the way the nodes themselves would: every node
recomputes its value from its own and its neighbors' previous values only.
Deviation norms are tracked through a renormalized copy of the residual
recursion (the residual obeys the same linear update), so they stay accurate
far below the level where the raw states have already rounded to the exact
average; without that the per-step ratios turn into noise after a few
hundred steps on fast-mixing networks.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import slem, slem_of_matrix
from .topology import ChainSpec, build_chain
from .weights import assemble, baseline_weights, optimal_weights

SIGNAL_FLOOR = 1e-13


class InsufficientSignalError(RuntimeError):
    """Deviations at the requested burn-in are too small to carry information."""


@dataclass(frozen=True)
class IterationTrace:
    """States x(0..T) and deviation norms ||x(t) - average||."""

    states: np.ndarray       # (T+1, n)
    deviations: np.ndarray   # (T+1,)
    steps: int

    def ratios(self) -> np.ndarray:
        """Per-step deviation ratios; nan where the previous deviation is zero."""
        prev = self.deviations[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(prev > 0.0, self.deviations[1:] / prev, np.nan)


def _local_pass(
    x: np.ndarray,
    self_weight: np.ndarray,
    neighbor_idx: list[np.ndarray],
    neighbor_w: list[np.ndarray],
) -> np.ndarray:
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = self_weight[i] * x[i] + neighbor_w[i] @ x[neighbor_idx[i]]
    return out


def iterate(W: np.ndarray, x0: Sequence[float], steps: int) -> IterationTrace:
    """Run the averaging iteration with per-node local updates."""
    W = np.asarray(W, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    n = W.shape[0]
    if x.shape != (n,):
        raise ValueError(f"state has shape {x.shape}, matrix needs ({n},)")
    if steps < 1:
        raise ValueError("need at least one step")

    self_weight = np.diag(W).copy()
    neighbor_idx: list[np.ndarray] = []
    neighbor_w: list[np.ndarray] = []
    off = W - np.diag(self_weight)
    for i in range(n):
        idx = np.nonzero(off[i])[0]
        neighbor_idx.append(idx)
        neighbor_w.append(off[i, idx].copy())

    states = np.empty((steps + 1, n))
    states[0] = x
    average = np.full(n, x.mean())

    residual = x - average
    scale = float(np.linalg.norm(residual))
    deviations = np.empty(steps + 1)
    deviations[0] = scale
    if scale > 0.0:
        residual = residual / scale

    for t in range(1, steps + 1):
        states[t] = _local_pass(states[t - 1], self_weight, neighbor_idx, neighbor_w)
        if scale > 0.0:
            residual = _local_pass(residual, self_weight, neighbor_idx, neighbor_w)
            # the residual has zero mean at every step in exact arithmetic;
            # removing the rounding-injected mean keeps the stationary mode
            # from swamping the decaying signal after renormalization
            residual = residual - residual.mean()
            step_norm = float(np.linalg.norm(residual))
            scale *= step_norm
            if step_norm > 0.0:
                residual = residual / step_norm
        deviations[t] = scale
    return IterationTrace(states=states, deviations=deviations, steps=steps)


def convergence_factor(trace: IterationTrace, burn_in: int | None = None) -> float:
    """Geometric-mean per-step deviation ratio over the tail after burn-in.

    For a generic initial state this estimates the SLEM of the weight matrix.
    Burn-in defaults to half the run; it must leave at least ten tail steps
    and sit above the signal floor.
    """
    if burn_in is None:
        burn_in = trace.steps // 2
    if not trace.steps > burn_in + 10:
        raise ValueError(f"need steps > burn_in + 10, got {trace.steps} and {burn_in}")
    d_start = float(trace.deviations[burn_in])
    d_end = float(trace.deviations[-1])
    if d_start <= SIGNAL_FLOOR or d_end <= 0.0:
        raise InsufficientSignalError(
            f"deviation {d_start:.3e} at burn-in {burn_in} is below the signal floor; "
            "reduce the horizon or the burn-in"
        )
    return float((d_end / d_start) ** (1.0 / (trace.steps - burn_in)))


def widest_valid_burn_in(trace: IterationTrace, cap: int | None = None) -> int:
    """Largest burn-in not past `cap` whose deviation still clears the floor
    with margin.  Keeps long runs on fast-mixing networks usable."""
    if cap is None:
        cap = trace.steps // 2
    cap = min(cap, trace.steps - 11)
    t = cap
    while t > 0 and trace.deviations[t] < 10.0 * SIGNAL_FLOOR:
        t -= 1
    return t


def random_initial_state(n: int, seed: int) -> np.ndarray:
    """Generic start vector, uniform on [-1, 1]^n."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, n)


@dataclass(frozen=True)
class SchemeComparison:
    scheme: str
    analytic_slem: float
    empirical_factor: float


def compare_schemes(
    spec: ChainSpec | Sequence[int],
    schemes: Sequence[str],
    steps: int,
    seed: int,
) -> list[SchemeComparison]:
    """Side-by-side analytic SLEM and measured factor per weighting scheme."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    t = build_chain(spec)
    x0 = random_initial_state(spec.node_count, seed)
    rows = []
    for scheme in schemes:
        if scheme == "optimal":
            W = assemble(spec, optimal_weights(spec))
            analytic = slem(spec, optimal_weights(spec)).slem
        else:
            W = baseline_weights(t, scheme)
            analytic = slem_of_matrix(W).slem
        trace = iterate(W, x0, steps)
        factor = convergence_factor(trace, widest_valid_burn_in(trace))
        rows.append(
            SchemeComparison(scheme=scheme, analytic_slem=analytic, empirical_factor=factor)
        )
    return rows


def trace_to_csv(trace: IterationTrace) -> str:
    """Columns (t, deviation_norm, ratio); ratio is empty at t = 0."""
    buf = io.StringIO()
    buf.write("t,deviation_norm,ratio\n")
    ratios = trace.ratios()
    for t in range(trace.steps + 1):
        ratio = "" if t == 0 or not np.isfinite(ratios[t - 1]) else repr(float(ratios[t - 1]))
        buf.write(f"{t},{repr(float(trace.deviations[t]))},{ratio}\n")
    return buf.getvalue()
