"""Characteristic polynomial of the optimally weighted coupling block.

At the closed-form weights the 2m nontrivial coupling-mode eigenvalues are
the roots of an even polynomial of degree 2m in s.  The polynomial is built
by a three-term recursion over the blocks; rescaling each stage by the
accumulated sqrt(n_r * n_{r+1}) factors keeps every coefficient an exact
integer.  Written in u = s^2 the recursion is

    E_1 = 1,   O_2 = n_1 + 1,
    E_{2i+1} = (n_i + 1) u O_{2i} - E_{2i-1}          i = 1 .. m-1
    O_{2i+2} = (n_{i+1} + 1) E_{2i+1} - n_i n_{i+1} O_{2i}   i = 1 .. m-2

closing with

    Q(u) = ((n_m + 1)^2 u - 1) E_{2m-1} - (n_m + 1) n_{m-1} n_m u O_{2m-2}.

For m = 2 this expands to exactly

    (n_1+1)^2 (n_2+1)^2 u^2
      - ((n_1+1)^2 + (n_2+1)^2 + n_1 n_2 (n_1+1)(n_2+1)) u + 1.

All roots of Q lie in (0, 1) and are simple, so they can be isolated with
Sturm-sequence counts and finished by plain sign bisection; the reported
SLEM is the largest root of the polynomial in s.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .topology import ChainSpec


class UnsupportedOrderError(ValueError):
    """The recursion needs at least two blocks."""


class RootInconsistencyError(RuntimeError):
    """Root structure contradicts the contract (outside (-1, 1) or not simple)."""


def _padd(a: list[int], b: list[int]) -> list[int]:
    k = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(k)]


def _pscale(a: list[int], c: int) -> list[int]:
    return [c * x for x in a]


def _pshift(a: list[int]) -> list[int]:
    return [0] + list(a)   # multiply by u


@dataclass(frozen=True)
class EvenPolynomial:
    """Polynomial with only even powers of s, stored by its u = s^2 coefficients."""

    u_coefficients: tuple[int, ...]   # lowest power first

    @property
    def degree(self) -> int:
        return 2 * (len(self.u_coefficients) - 1)

    def s_coefficients(self) -> tuple[int, ...]:
        """Coefficients in s, lowest power first; odd entries are zero."""
        out: list[int] = []
        for c in self.u_coefficients:
            out.extend((c, 0))
        return tuple(out[:-1])

    def evaluate_u(self, u: float) -> float:
        acc = 0.0
        for c in reversed(self.u_coefficients):
            acc = acc * u + c
        return acc

    def evaluate(self, s: float) -> float:
        return self.evaluate_u(s * s)

    def as_dict(self) -> dict:
        return {"u_coefficients": list(self.u_coefficients), "degree": self.degree}

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def charpoly(spec: ChainSpec | Sequence[int]) -> EvenPolynomial:
    """Even polynomial whose 2m roots are the nontrivial coupling modes at
    the optimal weights.  Needs at least two blocks."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    m = spec.block_count
    if m < 2:
        raise UnsupportedOrderError("the recursion closes only for two or more blocks")
    n = spec.orders
    E = [1]                # E_1
    O = [n[0] + 1]         # O_2
    for i in range(1, m):  # block index i in 1..m-1
        E_next = _padd(_pscale(_pshift(O), n[i - 1] + 1), _pscale(E, -1))
        if i < m - 1:
            O = _padd(_pscale(E_next, n[i] + 1), _pscale(O, -n[i - 1] * n[i]))
        E = E_next
    q = _padd(
        _padd(_pscale(_pshift(E), (n[-1] + 1) ** 2), _pscale(E, -1)),
        _pscale(_pshift(O), -(n[-1] + 1) * n[-2] * n[-1]),
    )
    return EvenPolynomial(u_coefficients=tuple(q))


def _sturm_chain(coeffs: Sequence[int]) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in coeffs]
    while p0 and p0[-1] == 0:
        p0.pop()
    p1 = [Fraction(k * c) for k, c in enumerate(p0)][1:]
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        a, b = chain[-2][:], chain[-1]
        rem = a
        # polynomial remainder of a by b
        while len(rem) >= len(b) and any(rem):
            factor = rem[-1] / b[-1]
            shift = len(rem) - len(b)
            for k in range(len(b)):
                rem[shift + k] -= factor * b[k]
            while rem and rem[-1] == 0:
                rem.pop()
        if not rem:
            break   # repeated root; caller detects via counts
        chain.append([-c for c in rem])
    return chain


def _sign_changes(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        acc = Fraction(0)
        for c in reversed(poly):
            acc = acc * x + c
        if acc != 0:
            signs.append(1 if acc > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _roots_in_unit_interval(p: EvenPolynomial, expected: int) -> list[float]:
    chain = _sturm_chain(p.u_coefficients)
    count = lambda a, b: _sign_changes(chain, a) - _sign_changes(chain, b)
    total = count(Fraction(0), Fraction(1))
    if total != expected:
        raise RootInconsistencyError(
            f"expected {expected} roots in u in (0, 1], found {total}"
        )
    # isolate by bisection on exact counts
    pending = [(Fraction(0), Fraction(1), total)]
    isolated: list[tuple[Fraction, Fraction]] = []
    depth = 0
    while pending:
        a, b, k = pending.pop()
        if k == 1:
            isolated.append((a, b))
            continue
        depth += 1
        if depth > 4000:
            raise RootInconsistencyError("root isolation failed; roots not simple?")
        mid = (a + b) / 2
        left = count(a, mid)
        if left:
            pending.append((a, mid, left))
        if k - left:
            pending.append((mid, b, k - left))

    roots = []
    for a, b in isolated:
        lo, hi = float(a), float(b)
        flo = p.evaluate_u(lo)
        if flo == 0.0:   # endpoint is dyadic; exact count put the root right of it
            lo = np.nextafter(lo, hi)
            flo = p.evaluate_u(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            fm = p.evaluate_u(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return sorted(roots)


def charpoly_roots(p: EvenPolynomial, tol: float = 1e-12) -> np.ndarray:
    """All real roots in s, sorted decreasing.

    The polynomial must have every root inside (-1, 1); anything else means
    the recursion or its input is broken and raises RootInconsistencyError.
    The largest returned root is the SLEM at the optimal weights.
    """
    deg_u = len(p.u_coefficients) - 1
    if deg_u < 1:
        raise RootInconsistencyError("constant polynomial has no roots")
    u_roots = _roots_in_unit_interval(p, deg_u)
    if u_roots and (u_roots[0] <= 0.0 or u_roots[-1] >= 1.0 + tol):
        raise RootInconsistencyError("root outside the open unit disc in s")
    s = np.sqrt(np.array(u_roots))
    return np.sort(np.concatenate([s, -s]))[::-1]


def largest_root(spec: ChainSpec | Sequence[int]) -> float:
    """SLEM at optimal weights by the recursion-polynomial route."""
    return float(charpoly_roots(charpoly(spec))[0])
