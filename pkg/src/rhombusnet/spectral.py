"""Stratified spectral analysis of chain weight matrices.

Interchangeability of the interior nodes inside each block splits the full
spectrum into two pieces that are cheap to compute:

* a symmetric tridiagonal quotient of size 2m + 1 carrying the coupling
  modes (one row per junction, one per block interior stratum), and
* one diagonal value 1 - w[2r] - w[2r+1] per block, entering the full
  spectrum with multiplicity n_r - 1 (the interior-difference modes).

The tridiagonal block always fixes the stratification vector v (ones on
junction rows, sqrt(n_r) on block rows), which descends from the all-ones
eigenvector of the full matrix; ||v||^2 equals the node count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .topology import ChainSpec
from .weights import assemble, check_orbit_weights, optimal_weights

UNION_TOL = 1e-9


@dataclass(frozen=True)
class QuotientPair:
    """Tridiagonal coupling block plus per-block interior diagonal values."""

    tridiagonal: np.ndarray     # (2m+1, 2m+1) symmetric
    diagonal_block: np.ndarray  # (m,) entries 1 - w[2r] - w[2r+1]

    @property
    def size(self) -> int:
        return self.tridiagonal.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in decreasing order with the accuracy actually achieved."""

    eigenvalues: np.ndarray
    tol: float


@dataclass(frozen=True)
class SlemReport:
    """Second largest eigenvalue modulus and where it comes from.

    attaining_source is "quotient-tridiagonal" when a coupling mode attains
    the modulus (ties resolve this way), "diagonal-block" when an
    interior-difference value does, or "full-matrix" for reports on matrices
    without the chain structure.  stratified is False when the value was
    taken from a dense full-matrix solve alone (single-block chains and
    generic matrices).
    """

    slem: float
    lambda2: float
    lambda_min: float
    attaining_source: str
    stratified: bool


def stratification_vector(spec: ChainSpec) -> np.ndarray:
    m = spec.block_count
    v = np.ones(2 * m + 1)
    v[1::2] = np.sqrt(spec.orders)
    return v


def direction_vectors(spec: ChainSpec) -> np.ndarray:
    """Rank-one directions a_k with T = I - sum_k w[k] a_k a_k^T, one per orbit."""
    m = spec.block_count
    A = np.zeros((2 * m, 2 * m + 1))
    for r, n in enumerate(spec.orders):
        A[2 * r, 2 * r] = np.sqrt(n)
        A[2 * r, 2 * r + 1] = -1.0
        A[2 * r + 1, 2 * r + 1] = 1.0
        A[2 * r + 1, 2 * r + 2] = -np.sqrt(n)
    return A


def quotient(spec: ChainSpec | Sequence[int], w: Sequence[float]) -> QuotientPair:
    """Stratified quotient blocks for the given orbit weights."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = check_orbit_weights(spec, w)
    m = spec.block_count
    orders = spec.orders
    diag = np.zeros(2 * m + 1)
    off = np.zeros(2 * m)
    diag[0] = 1.0 - orders[0] * w[0]
    for r in range(m):
        diag[2 * r + 1] = 1.0 - w[2 * r] - w[2 * r + 1]
        off[2 * r] = np.sqrt(orders[r]) * w[2 * r]
        off[2 * r + 1] = np.sqrt(orders[r]) * w[2 * r + 1]
        if r < m - 1:
            diag[2 * r + 2] = 1.0 - orders[r] * w[2 * r + 1] - orders[r + 1] * w[2 * r + 2]
    diag[2 * m] = 1.0 - orders[-1] * w[2 * m - 1]
    T = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    interior = np.array([1.0 - w[2 * r] - w[2 * r + 1] for r in range(m)])
    return QuotientPair(tridiagonal=T, diagonal_block=interior)


def gram(spec: ChainSpec | Sequence[int]) -> np.ndarray:
    """Tridiagonal matrix of pairwise inner products of the rank-one directions."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    m = spec.block_count
    diag = np.repeat([n + 1.0 for n in spec.orders], 2)
    off = np.zeros(2 * m - 1)
    for k in range(2 * m - 1):
        if k % 2 == 0:
            off[k] = -1.0
        else:
            r = (k - 1) // 2
            off[k] = -np.sqrt(spec.orders[r] * spec.orders[r + 1])
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def eig_sym(matrix: np.ndarray, tol: float = 1e-10) -> Spectrum:
    """Eigenvalues of a symmetric matrix, sorted decreasing."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    eigs = np.linalg.eigvalsh(matrix)[::-1]
    achieved = matrix.shape[0] * np.finfo(float).eps * max(1.0, float(np.abs(eigs).max(initial=0.0)))
    if achieved > tol:
        raise ValueError(f"requested tolerance {tol:g} below attainable {achieved:g}")
    return Spectrum(eigenvalues=eigs, tol=achieved)


def spectrum_to_json(spectrum: Spectrum) -> str:
    return json.dumps([float(x) for x in spectrum.eigenvalues])


def _union_spectrum(spec: ChainSpec, qp: QuotientPair) -> np.ndarray:
    """Coupling-mode eigenvalues plus interior values at multiplicity n_r - 1, ascending."""
    parts = [np.linalg.eigvalsh(qp.tridiagonal)]
    for r, n in enumerate(spec.orders):
        if n > 1:
            parts.append(np.full(n - 1, qp.diagonal_block[r]))
    return np.sort(np.concatenate(parts))


def _nontrivial_quotient_eigs(qp: QuotientPair) -> np.ndarray:
    """Quotient eigenvalues with the single stationary eigenvalue (the one
    nearest 1) removed."""
    eigs = np.linalg.eigvalsh(qp.tridiagonal)
    drop = int(np.argmin(np.abs(eigs - 1.0)))
    return np.delete(eigs, drop)


def slem(spec: ChainSpec | Sequence[int], w: Sequence[float]) -> SlemReport:
    """SLEM of the chain weight matrix, with its attaining source.

    For two or more blocks the value comes from the stratified union and is
    cross-checked against a dense solve of the full matrix; a single-block
    chain is reported from the dense spectrum alone (stratified=False).
    """
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = check_orbit_weights(spec, w)
    qp = quotient(spec, w)
    dense = np.linalg.eigvalsh(assemble(spec, w))
    union = _union_spectrum(spec, qp)
    if union.shape != dense.shape or np.max(np.abs(union - dense)) > UNION_TOL:
        raise RuntimeError(
            "stratified union disagrees with the dense spectrum; "
            "quotient construction is inconsistent"
        )

    nontrivial = _nontrivial_quotient_eigs(qp)
    slem_quotient = float(np.abs(nontrivial).max())
    interior = [
        float(abs(qp.diagonal_block[r])) for r, n in enumerate(spec.orders) if n > 1
    ]
    slem_interior = max(interior) if interior else -np.inf
    if slem_quotient >= slem_interior - UNION_TOL:
        source = "quotient-tridiagonal"
    else:
        source = "diagonal-block"

    spectrum = dense[::-1]
    return SlemReport(
        slem=float(max(spectrum[1], -spectrum[-1])),
        lambda2=float(spectrum[1]),
        lambda_min=float(spectrum[-1]),
        attaining_source=source,
        stratified=spec.block_count >= 2,
    )


def slem_of_matrix(W: np.ndarray) -> SlemReport:
    """SLEM of an arbitrary symmetric row-stochastic matrix (dense route)."""
    spectrum = eig_sym(W).eigenvalues
    return SlemReport(
        slem=float(max(spectrum[1], -spectrum[-1])),
        lambda2=float(spectrum[1]),
        lambda_min=float(spectrum[-1]),
        attaining_source="full-matrix",
        stratified=False,
    )


def deflated_quotient(spec: ChainSpec, w: Sequence[float]) -> np.ndarray:
    """Tridiagonal block with the stationary direction projected out.

    Subtracting the normalized outer product of the stratification vector
    replaces the eigenvalue at 1 by 0 and leaves the rest untouched, so the
    largest modulus of the result (together with the interior values) is the
    exact per-step contraction of deviation from the average.
    """
    qp = quotient(spec, w)
    v = stratification_vector(spec)
    v = v / np.linalg.norm(v)
    return qp.tridiagonal - np.outer(v, v)


def contraction_factor(spec: ChainSpec | Sequence[int], w: Sequence[float]) -> float:
    """Spectral norm of (W - averaging projector), via the stratified blocks."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = check_orbit_weights(spec, w)
    eigs = np.linalg.eigvalsh(deflated_quotient(spec, w))
    val = float(max(abs(eigs[0]), abs(eigs[-1])))
    for r, n in enumerate(spec.orders):
        if n > 1:
            val = max(val, abs(1.0 - w[2 * r] - w[2 * r + 1]))
    return val


def spectrum_union_check(
    spec: ChainSpec | Sequence[int], w: Sequence[float], tol: float = UNION_TOL
) -> bool:
    """True iff the dense spectrum equals, as a multiset, the stratified union."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = check_orbit_weights(spec, w)
    union = _union_spectrum(spec, quotient(spec, w))
    dense = np.linalg.eigvalsh(assemble(spec, w))
    return union.shape == dense.shape and float(np.max(np.abs(union - dense))) <= tol


def interlacing_check(spec: ChainSpec | Sequence[int], w: Sequence[float]) -> bool:
    """Containment of every interior value in the quotient's eigenvalue range.

    At the closed-form optimal weights the interior values must additionally
    be bounded by the SLEM itself.  Requires at least two blocks; the
    containment argument has no content for a single block.
    """
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    if spec.block_count < 2:
        raise ValueError("interlacing check needs at least two blocks")
    w = check_orbit_weights(spec, w)
    qp = quotient(spec, w)
    eigs = np.linalg.eigvalsh(qp.tridiagonal)
    lo, hi = eigs[0] - 1e-12, eigs[-1] + 1e-12
    if not all(lo <= d <= hi for d in qp.diagonal_block):
        return False
    if np.allclose(w, optimal_weights(spec), rtol=0.0, atol=1e-12):
        bound = slem(spec, w).slem + 1e-12
        if any(abs(d) > bound for d in qp.diagonal_block):
            return False
    return True


def quotient_slem_via_dense(spec: ChainSpec | Sequence[int]) -> float:
    """Largest coupling-mode modulus at the optimal weights, extracted from a
    dense solve of the full matrix.

    The dense spectrum is stripped of the stationary eigenvalue and of the
    interior-difference values (n_r - 1) / (n_r + 1), whose multiplicities
    n_r - 1 are known a priori; what remains are the 2m coupling modes.  This
    route shares nothing with the quotient construction or the recursion
    polynomial, which is what makes it a usable cross-check for both.
    """
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    w = optimal_weights(spec)
    eigs = list(np.linalg.eigvalsh(assemble(spec, w)))

    def pop_closest(target: float) -> float:
        k = min(range(len(eigs)), key=lambda i: abs(eigs[i] - target))
        return eigs.pop(k)

    stationary = pop_closest(1.0)
    if abs(stationary - 1.0) > 1e-8:
        raise RuntimeError("stationary eigenvalue missing from dense spectrum")
    for n in spec.orders:
        expected = (n - 1.0) / (n + 1.0)
        for _ in range(n - 1):
            got = pop_closest(expected)
            if abs(got - expected) > 1e-8:
                raise RuntimeError(
                    f"interior eigenvalue {expected} missing from dense spectrum"
                )
    return float(np.max(np.abs(eigs)))
