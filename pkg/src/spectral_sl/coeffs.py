"""Triangular coefficient tables for exponential-series solutions.

For the operator -y'' + q(x) y = lambda^2 rho(x) y with a band-limited
potential q(x) = sum_{n>=1} q_n e^{inx}, the solution series are built from a
triangular array V[n, a] (1 <= n <= a <= A) satisfying

    a (a - n) V[n, a] + sum_{s=n}^{a-1} q_{a-s} V[n, s] = 0    (n < a)
    a * sum_{n=1}^{a} V[n, a] + q_a = 0

The second relation inverts directly to q_a = -a * sum_n V[n, a], and the
diagonal alone determines the whole table through

    V[n, a+n] = V[n, n] * sum_{m=1}^{a} V[m, a] / (m + n),

filled column by column.  All of that lives here; nothing in this module
depends on the spectral parameter.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class TruncationWarning(UserWarning):
    """Weighted-norm column contributions stopped decreasing."""


@dataclass(frozen=True)
class FourierPotential:
    """Density parameter beta plus the stored harmonics q_1 ... q_N."""

    beta: float
    q: tuple = ()

    def __post_init__(self):
        if isinstance(self.beta, complex):
            raise ValueError("beta must be a real scalar")
        beta = float(self.beta)
        if not math.isfinite(beta) or beta <= 0.0:
            raise ValueError(f"beta must be finite and positive, got {beta!r}")
        object.__setattr__(self, "beta", beta)
        coeffs = tuple(complex(c) for c in self.q)
        if any(not (math.isfinite(c.real) and math.isfinite(c.imag)) for c in coeffs):
            raise ValueError("harmonics must be finite")
        object.__setattr__(self, "q", coeffs)

    @property
    def n_harmonics(self) -> int:
        return len(self.q)

    def harmonic(self, n: int) -> complex:
        """q_n, with harmonics beyond the stored band exactly zero."""
        if n < 1:
            raise ValueError("harmonic index starts at 1")
        return self.q[n - 1] if n <= len(self.q) else 0.0 + 0.0j

    def at(self, x) -> complex:
        """Evaluate q(x) = sum_n q_n e^{inx}."""
        return sum(c * cmath.exp(1j * n * x) for n, c in enumerate(self.q, start=1))


@dataclass(frozen=True)
class TailReport:
    """Weighted norm of a table split into stored part and projected tail."""

    stored: float
    tail_estimate: float
    converged: bool

    @property
    def total(self) -> float:
        return self.stored + self.tail_estimate


class CoefficientTable:
    """Immutable triangular array V[n, a], 1 <= n <= a <= order.

    Entries are stored in a dense complex matrix; position [n-1, a-1] holds
    V[n, a] and everything below the diagonal is zero.
    """

    def __init__(self, entries: np.ndarray):
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        if entries.shape[0] < 1:
            raise ValueError("order must be at least 1")
        entries[np.tril_indices(entries.shape[0], k=-1)] = 0.0
        entries.setflags(write=False)
        self._entries = entries
        self._cache = {}

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def entry(self, n: int, a: int) -> complex:
        if not (1 <= n <= a <= self.order):
            raise IndexError(f"require 1 <= n <= a <= {self.order}")
        return complex(self._entries[n - 1, a - 1])

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self._entries).copy()

    def row_sums(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(sum_a V[n,a] e^{iax}, sum_a V[n,a] (ia) e^{iax}) for each row n.

        x may be complex; results are cached per x so repeated evaluation at
        a fixed point (x = 0 above all) costs one matrix-vector product.
        """
        key = complex(x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if len(self._cache) > 256:
            self._cache.clear()
        alphas = np.arange(1, self.order + 1)
        e = np.exp(1j * alphas * key)
        s = self._entries @ e
        ds = self._entries @ (1j * alphas * e)
        self._cache[key] = (s, ds)
        return s, ds

    @property
    def tail_estimate(self) -> float:
        """Projected dropped-tail contribution of the weighted norm."""
        return tail_report(self, warn=False).tail_estimate


def build_table(potential: FourierPotential, order: int = 30) -> CoefficientTable:
    """Fill the table column by column from the potential harmonics.

    The divisor a (a - n) is at least 1, so the recursion never degenerates.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    q = np.zeros(order + 1, dtype=complex)
    for n in range(1, order + 1):
        q[n] = potential.harmonic(n)
    v = np.zeros((order + 1, order + 1), dtype=complex)
    for a in range(1, order + 1):
        for n in range(1, a):
            acc = 0.0 + 0.0j
            for s in range(n, a):
                acc += q[a - s] * v[n, s]
            v[n, a] = -acc / (a * (a - n))
        v[a, a] = -q[a] / a - v[1:a, a].sum()
    return CoefficientTable(v[1:, 1:])


def table_from_diagonal(diag: Sequence[complex]) -> CoefficientTable:
    """Rebuild the full table from its diagonal V[n, n].

    Columns are filled in increasing order; the entry V[n, c] (n < c) only
    needs the fully known column c - n, so every right-hand side term is
    available by the time it is used.
    """
    diag = [complex(d) for d in diag]
    order = len(diag)
    if order < 1:
        raise ValueError("need at least one diagonal entry")
    v = np.zeros((order + 1, order + 1), dtype=complex)
    for n in range(1, order + 1):
        v[n, n] = diag[n - 1]
    for c in range(2, order + 1):
        for n in range(1, c):
            a = c - n
            acc = 0.0 + 0.0j
            for m in range(1, a + 1):
                acc += v[m, a] / (m + n)
            v[n, c] = v[n, n] * acc
    return CoefficientTable(v[1:, 1:])


def harmonics_from_table(table: CoefficientTable) -> list:
    """q_a = -a * sum_n V[n, a] for a = 1 ... order."""
    ent = table.entries
    return [
        complex(-a * ent[:a, a - 1].sum()) for a in range(1, table.order + 1)
    ]


def recurrence_residuals(table: CoefficientTable, harmonics: Sequence[complex]) -> tuple[float, float]:
    """Max absolute residuals of the two defining recurrences.

    ``harmonics`` supplies q_1 ... (missing entries are treated as zero);
    returns (off-diagonal residual, column-sum residual).
    """
    order = table.order
    q = np.zeros(order + 1, dtype=complex)
    for n, c in enumerate(harmonics, start=1):
        if n <= order:
            q[n] = complex(c)
    ent = table.entries
    r_offdiag = 0.0
    r_colsum = 0.0
    for a in range(1, order + 1):
        for n in range(1, a):
            acc = a * (a - n) * ent[n - 1, a - 1]
            for s in range(n, a):
                acc += q[a - s] * ent[n - 1, s - 1]
            r_offdiag = max(r_offdiag, abs(acc))
        r_colsum = max(r_colsum, abs(a * ent[:a, a - 1].sum() + q[a]))
    return r_offdiag, r_colsum


def _column_contributions(table: CoefficientTable) -> np.ndarray:
    ent = np.abs(table.entries)
    order = table.order
    n = np.arange(1, order + 1, dtype=float)
    a = np.arange(1, order + 1, dtype=float)
    weighted = (ent / n[:, None]) * a[None, :]
    return weighted.sum(axis=0)


def tail_weight(table: CoefficientTable) -> float:
    """Stored part of the weighted norm sum_n (1/n) sum_a a |V[n, a]|."""
    return float(_column_contributions(table).sum())


def tail_report(table: CoefficientTable, warn: bool = True) -> TailReport:
    """Weighted norm plus a geometric projection of the dropped columns.

    The projection takes the decay ratio of the final columns; when the
    column contributions fail to decrease over the last five columns the
    estimate is reported as non-converged (a warning, never an error: the
    recursion itself is always well defined).
    """
    contrib = _column_contributions(table)
    stored = float(contrib.sum())
    nonzero = contrib[contrib > 0.0]
    if nonzero.size == 0:
        return TailReport(stored=stored, tail_estimate=0.0, converged=True)
    window = contrib[-5:]
    if window.size >= 2 and not all(
        window[i + 1] < window[i] or window[i + 1] == 0.0 for i in range(window.size - 1)
    ):
        if warn:
            warnings.warn(
                "column contributions are not decreasing; raise the order",
                TruncationWarning,
                stacklevel=2,
            )
        return TailReport(stored=stored, tail_estimate=math.inf, converged=False)
    last = float(contrib[-1])
    if last == 0.0:
        return TailReport(stored=stored, tail_estimate=0.0, converged=True)
    prev = float(contrib[-2]) if contrib.size >= 2 else None
    if prev is None or prev == 0.0:
        # single-column table: nothing to extrapolate from
        return TailReport(stored=stored, tail_estimate=last, converged=True)
    ratio = last / prev
    if ratio >= 1.0:
        if warn:
            warnings.warn(
                "column contributions are not decreasing; raise the order",
                TruncationWarning,
                stacklevel=2,
            )
        return TailReport(stored=stored, tail_estimate=math.inf, converged=False)
    return TailReport(stored=stored, tail_estimate=last * ratio / (1.0 - ratio), converged=True)
