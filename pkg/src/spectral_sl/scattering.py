"""Wronskians and the connection coefficients linking the solution families.

The two families are each fundamental on their half of the line; matching
value and derivative across the density jump expresses one in terms of the
other.  The four coefficients stored here are normalised so that at q = 0

    c11 = -(1 - i beta)/2,   c12 = -(1 + i beta)/2,
    c21 = (i - beta)/(2 beta),   c22 = -(beta + i)/(2 beta),

the large-|lambda| limits of the general case.  With this normalisation the
matching combinations carry an extra overall minus sign (see
`solutions.extend_across_zero`), the identities

    c22(lam) = (i/beta) c11(-lam),      c21(lam) = -(i/beta) c12(lam)

hold, and the zeros of the four coefficients in the open quadrants are the
eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .coeffs import CoefficientTable
from .errors import ExtrapolationDivergence, ZeroWavenumber
from .solutions import POLE_TOL, SolutionSample, eval_f1, eval_f2


@dataclass(frozen=True)
class ConnectionCoefficients:
    """The coefficient quadruple at a fixed spectral parameter."""

    lam: complex
    c11: complex
    c12: complex
    c21: complex
    c22: complex


def wronskian(f: SolutionSample, g: SolutionSample) -> complex:
    """f' g - f g' from two samples taken at the same (x, lambda).

    Orientation fixed so the two oscillatory branches give exactly 2 i lam
    and the two exponential branches 2 lam beta.
    """
    return f.derivative * g.value - f.value * g.derivative


def _zero_samples(table: CoefficientTable, beta: float, lam: np.ndarray) -> dict:
    """Vectorised values / derivatives of all four branches at x = 0."""
    lam = np.asarray(lam, dtype=complex)
    s, ds = table.row_sums(0.0)
    n = np.arange(1, table.order + 1, dtype=float)
    out = {}
    for branch, sgn in (("+", 1.0), ("-", -1.0)):
        w1 = 1.0 / (n[:, None] + sgn * 2.0 * lam[None, :])
        g1 = (s[:, None] * w1).sum(axis=0)
        dg1 = (ds[:, None] * w1).sum(axis=0)
        out[f"f1{branch}"] = 1.0 + g1
        out[f"df1{branch}"] = sgn * 1j * lam * (1.0 + g1) + dg1
        w2 = 1.0 / (n[:, None] - sgn * 2j * beta * lam[None, :])
        g2 = (s[:, None] * w2).sum(axis=0)
        dg2 = (ds[:, None] * w2).sum(axis=0)
        out[f"f2{branch}"] = 1.0 + g2
        out[f"df2{branch}"] = sgn * beta * lam * (1.0 + g2) + dg2
    return out


def coefficient_evaluators(
    table: CoefficientTable, beta: float
) -> tuple[Callable, Callable]:
    """(c11, c12) as vectorised functions of the spectral parameter.

    No pole guarding: near the real half-integers c11 is large but finite,
    which is exactly what the pole-strength extraction samples.
    """

    def c11(lam):
        arr = np.atleast_1d(np.asarray(lam, dtype=complex))
        z = _zero_samples(table, beta, arr)
        w = z["df1-"] * z["f2+"] - z["f1-"] * z["df2+"]
        out = w / (2j * arr)
        return out if np.ndim(lam) else complex(out[0])

    def c12(lam):
        arr = np.atleast_1d(np.asarray(lam, dtype=complex))
        z = _zero_samples(table, beta, arr)
        w = z["df2+"] * z["f1+"] - z["f2+"] * z["df1+"]
        out = w / (2j * arr)
        return out if np.ndim(lam) else complex(out[0])

    return c11, c12


def connection_coefficients(
    table: CoefficientTable,
    beta: float,
    lam: complex,
    pole_tol: float = POLE_TOL,
) -> ConnectionCoefficients:
    """All four coefficients at lam, each from its own Wronskian at x = 0.

    The cross identities relating them are not used in the construction, so
    they stay available as independent consistency checks.
    """
    lam = complex(lam)
    if abs(lam) < pole_tol:
        raise ZeroWavenumber("coefficients are undefined at lambda = 0")
    f1p = eval_f1(table, lam, 0.0, "+", pole_tol)
    f1m = eval_f1(table, lam, 0.0, "-", pole_tol)
    f2p = eval_f2(table, beta, lam, 0.0, "+", pole_tol)
    f2m = eval_f2(table, beta, lam, 0.0, "-", pole_tol)
    return ConnectionCoefficients(
        lam=lam,
        c11=wronskian(f1m, f2p) / (2j * lam),
        c12=wronskian(f2p, f1p) / (2j * lam),
        c21=wronskian(f1p, f2p) / (2.0 * lam * beta),
        c22=wronskian(f2m, f1p) / (2.0 * lam * beta),
    )


def matching_coefficients_f1(
    table: CoefficientTable, beta: float, lam: complex, pole_tol: float = POLE_TOL
) -> tuple[complex, complex]:
    """Coefficients (a, b) with f1+ = a f2+ + b f2- on x < 0.

    Built only from the exponential-family Wronskians, so it stays finite at
    the real half-integer points where c11 itself blows up.
    """
    lam = complex(lam)
    if abs(lam) < pole_tol:
        raise ZeroWavenumber("matching is undefined at lambda = 0")
    f1p = eval_f1(table, lam, 0.0, "+", pole_tol)
    f2p = eval_f2(table, beta, lam, 0.0, "+", pole_tol)
    f2m = eval_f2(table, beta, lam, 0.0, "-", pole_tol)
    c22 = wronskian(f2m, f1p) / (2.0 * lam * beta)
    c21 = wronskian(f1p, f2p) / (2.0 * lam * beta)
    return -c22, -c21


def matching_coefficients_f2(
    table: CoefficientTable, beta: float, lam: complex, pole_tol: float = POLE_TOL
) -> tuple[complex, complex]:
    """Coefficients (a, b) with f2+ = a f1+ + b f1- on x >= 0.

    Built only from the oscillatory-family Wronskians; finite at the
    imaginary lattice points where c22 blows up.
    """
    lam = complex(lam)
    if abs(lam) < pole_tol:
        raise ZeroWavenumber("matching is undefined at lambda = 0")
    f1p = eval_f1(table, lam, 0.0, "+", pole_tol)
    f1m = eval_f1(table, lam, 0.0, "-", pole_tol)
    f2p = eval_f2(table, beta, lam, 0.0, "+", pole_tol)
    c11 = wronskian(f1m, f2p) / (2j * lam)
    c12 = wronskian(f2p, f1p) / (2j * lam)
    return -c11, -c12


def richardson_limit(values: Sequence[complex], step_ratio: float) -> complex:
    """Limit of a sequence sampled at steps h, h/r, h/r^2, ... assuming an
    asymptotic power series in h."""
    level = [complex(v) for v in values]
    m = 1
    while len(level) > 1:
        factor = step_ratio**m
        level = [
            (factor * level[i + 1] - level[i]) / (factor - 1.0)
            for i in range(len(level) - 1)
        ]
        m += 1
    return level[0]


#: Sampling offsets for pole-strength extraction: a diagonal ray into the
#: first quadrant avoids both pole lattices.
POLE_STRENGTH_EPS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
POLE_STRENGTH_DIRECTION = complex(np.exp(0.25j * np.pi))


def pole_strength(
    c11_fn: Callable,
    c12_fn: Callable,
    n: int,
    eps: Sequence[float] = POLE_STRENGTH_EPS,
    direction: complex = POLE_STRENGTH_DIRECTION,
    rel_tol: float = 1e-6,
) -> complex:
    """Diagonal table entry V[n, n] from the coefficient ratio near n/2.

    Samples g(eps) = (n - 2 lam) c11(lam) / c12(lam) at lam = n/2 + eps * d
    and Richardson-extrapolates eps -> 0.  The extrapolated ratio equals
    -V[n, n]; the sign is fixed here so the returned value matches the
    diagonal of tables built directly from a potential.

    Raises ExtrapolationDivergence when the deepest two extrapolants
    disagree, the signature of c12 vanishing at n/2 (an eigenvalue sitting
    on the continuous spectrum).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    ratios = [eps[i] / eps[i + 1] for i in range(len(eps) - 1)]
    if len(set(round(r, 9) for r in ratios)) != 1:
        raise ValueError("eps must be geometrically spaced")
    step_ratio = ratios[0]
    samples = []
    for e in eps:
        lam = n / 2.0 + e * direction
        g = (n - 2.0 * lam) * complex(c11_fn(lam)) / complex(c12_fn(lam))
        if not np.isfinite(g.real) or not np.isfinite(g.imag):
            raise ExtrapolationDivergence(f"non-finite ratio sample at eps={e}")
        samples.append(g)
    full = richardson_limit(samples, step_ratio)
    prev = richardson_limit(samples[:-1], step_ratio)
    if abs(full - prev) > rel_tol * max(1.0, abs(full)):
        raise ExtrapolationDivergence(
            f"pole-strength estimates did not stabilise for n={n}: "
            f"{prev} vs {full}"
        )
    return -full


def c11_pole_strength(table: CoefficientTable, beta: float, n: int) -> complex:
    """Pole strength of c11/c12 at n/2 evaluated through the forward model;
    equals the table diagonal entry V[n, n]."""
    if not 1 <= n <= table.order:
        raise ValueError(f"require 1 <= n <= {table.order}")
    c11_fn, c12_fn = coefficient_evaluators(table, beta)
    return pole_strength(c11_fn, c12_fn, n)
