"""Series evaluation of the four fundamental solutions.

With V the coefficient table of the potential, the two solution families are

    f1(x, lam; +/-) = e^{+/- i lam x} (1 + sum_n (n +/- 2 lam)^{-1} sum_a V[n,a] e^{iax})
    f2(x, lam; +/-) = e^{+/- lam beta x} (1 + sum_n (n -/+ 2i lam beta)^{-1} sum_a V[n,a] e^{iax})

normalised by their exponential behaviour as Im x -> +infinity.  The f1 pair
solves -y'' + q y = lam^2 y (the x >= 0 form of the equation), the f2 pair
solves -y'' + q y = -lam^2 beta^2 y (the x < 0 form); both use the same
table.  The minus branch of either family is the plus branch at -lam, and
that reflection is how it is computed here, so the identity is exact.

Derivatives are always term-wise (analytic), never finite differences:
the Wronskian identities downstream are exact only with exact derivatives.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .coeffs import CoefficientTable, FourierPotential
from .errors import PoleProximity, ZeroWavenumber

#: Distance (in the lambda plane) under which generic series evaluation is
#: refused and the caller must use the scaled limit `eval_fn_limit`.
POLE_TOL = 1e-6

_TINY = 1e-300


@dataclass(frozen=True)
class SolutionSample:
    """Value and derivative of a solution at one (x, lambda), plus a crude
    bound on the series-truncation contribution."""

    value: complex
    derivative: complex
    truncation_error: float = 0.0

    def __post_init__(self):
        if self.truncation_error < 0.0:
            raise ValueError("truncation_error must be non-negative")


def pole_distance_f1(lam: complex, order: int, branch: str = "+") -> float:
    """Distance from lam to the pole lattice of the f1 series.

    The plus branch has simple poles at lam = -n/2, the minus branch at
    lam = +n/2, n = 1 ... order.
    """
    sign = -1.0 if branch == "+" else 1.0
    n = np.arange(1, order + 1)
    return float(np.min(np.abs(lam - sign * n / 2.0)))


def pole_distance_f2(lam: complex, beta: float, order: int, branch: str = "+") -> float:
    """Distance from lam to the pole lattice of the f2 series: -in/(2 beta)
    for the plus branch, +in/(2 beta) for the minus branch."""
    sign = -1.0 if branch == "+" else 1.0
    n = np.arange(1, order + 1)
    return float(np.min(np.abs(lam - sign * 1j * n / (2.0 * beta))))


def _guarded_distance(table, lattice: np.ndarray, lam: complex, pole_tol: float, what: str) -> float:
    """Distance to the nearest lattice point whose table row is nonzero.

    Lattice points with an identically zero row carry no singularity (the
    free case above all), so they never trigger the guard.
    """
    gaps = np.abs(lam - lattice)
    row_weights = np.abs(table.entries).sum(axis=1)
    live = row_weights > 0.0
    if not np.any(live):
        return float("inf")
    dist = float(np.min(gaps[live]))
    if dist < pole_tol:
        raise PoleProximity(f"lambda {lam} is within {pole_tol} of a pole of {what}")
    return dist


def _check_branch(branch: str) -> None:
    if branch not in ("+", "-"):
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def eval_f1(
    table: CoefficientTable,
    lam: complex,
    x,
    branch: str = "+",
    pole_tol: float = POLE_TOL,
) -> SolutionSample:
    """Evaluate the oscillatory-family solution and its x-derivative.

    x may be complex (the series is entire in x), which is how the
    normalisation at Im x -> infinity is checked in practice.

    Raises PoleProximity when lam is within ``pole_tol`` of the branch's
    pole lattice; use `eval_fn_limit` there instead.
    """
    _check_branch(branch)
    if branch == "-":
        return eval_f1(table, -complex(lam), x, "+", pole_tol)
    lam = complex(lam)
    n_lattice = -np.arange(1, table.order + 1) / 2.0
    dist = _guarded_distance(table, n_lattice, lam, pole_tol, "the f1+ series")
    s, ds = table.row_sums(x)
    n = np.arange(1, table.order + 1)
    denom = n + 2.0 * lam
    # an exact lattice hit can only pass the guard on an identically zero
    # row, where the term is zero regardless of the weight
    coeff = np.where(denom == 0.0, 0.0, 1.0 / np.where(denom == 0.0, 1.0, denom))
    g = complex(np.dot(coeff, s))
    dg = complex(np.dot(coeff, ds))
    phase = cmath.exp(1j * lam * complex(x))
    value = phase * (1.0 + g)
    derivative = phase * (1j * lam * (1.0 + g) + dg)
    tail = table.tail_estimate
    return SolutionSample(value, derivative, tail / max(dist, _TINY))


def eval_f2(
    table: CoefficientTable,
    beta: float,
    lam: complex,
    x,
    branch: str = "+",
    pole_tol: float = POLE_TOL,
) -> SolutionSample:
    """Evaluate the exponential-family solution and its x-derivative.

    Both branches share the table used by `eval_f1`; only the exponential
    prefactor and the resolvent-style denominators differ.
    """
    _check_branch(branch)
    if branch == "-":
        return eval_f2(table, beta, -complex(lam), x, "+", pole_tol)
    lam = complex(lam)
    i_lattice = -1j * np.arange(1, table.order + 1) / (2.0 * beta)
    dist = _guarded_distance(table, i_lattice, lam, pole_tol, "the f2+ series")
    s, ds = table.row_sums(x)
    n = np.arange(1, table.order + 1)
    denom = n - 2j * lam * beta
    coeff = np.where(denom == 0.0, 0.0, 1.0 / np.where(denom == 0.0, 1.0, denom))
    g = complex(np.dot(coeff, s))
    dg = complex(np.dot(coeff, ds))
    phase = cmath.exp(lam * beta * complex(x))
    value = phase * (1.0 + g)
    derivative = phase * (lam * beta * (1.0 + g) + dg)
    tail = table.tail_estimate
    return SolutionSample(value, derivative, tail / max(dist, _TINY))


def eval_fn_limit(table: CoefficientTable, n: int, x, sign: str = "+") -> complex:
    """Scaled limit of f1 at the half-integer points.

    Returns lim (n +/- 2 lam) f1(x, lam; +/-) as lam -> -/+ n/2, which is
    the single row series sum_{a>=n} V[n, a] e^{iax} e^{-i(n/2)x}.  Both
    branch limits produce the same function (the minus branch is the plus
    branch reflected in lam, and the reflection maps one limit point onto
    the other), so ``sign`` only mirrors the caller's bookkeeping.
    """
    _check_branch(sign)
    if not 1 <= n <= table.order:
        raise ValueError(f"require 1 <= n <= {table.order}")
    row = table.entries[n - 1, n - 1 :]
    alphas = np.arange(n, table.order + 1)
    series = complex(np.dot(row, np.exp(1j * alphas * complex(x))))
    return series * cmath.exp(-0.5j * n * complex(x))


def ode_residual(
    potential: FourierPotential,
    table: CoefficientTable,
    lam: complex,
    x: float,
    which: str,
    pole_tol: float = POLE_TOL,
) -> complex:
    """-f'' + q(x) f - lam^2 rho(x) f for one of the four truncated series.

    The second derivative is exact term-wise differentiation of the stored
    series.  ``which`` is one of 'f1+', 'f1-', 'f2+', 'f2-'; rho(x) is 1 for
    x >= 0 and -beta^2 otherwise (evaluate away from the jump at 0).
    """
    if which not in ("f1+", "f1-", "f2+", "f2-"):
        raise ValueError(f"unknown solution tag {which!r}")
    lam = complex(lam)
    family, branch = which[:2], which[2]
    sgn = 1.0 if branch == "+" else -1.0
    order = table.order
    n = np.arange(1, order + 1)
    if family == "f1":
        _guarded_distance(table, -sgn * n / 2.0, lam, pole_tol, which)
        k = sgn * 1j * lam
        denom = n + sgn * 2.0 * lam
    else:
        _guarded_distance(
            table, -sgn * 1j * n / (2.0 * potential.beta), lam, pole_tol, which
        )
        k = sgn * lam * potential.beta
        denom = n - sgn * 2j * lam * potential.beta
    weights = np.where(denom == 0.0, 0.0, 1.0 / np.where(denom == 0.0, 1.0, denom))

    alphas = np.arange(1, order + 1)
    e = np.exp(1j * alphas * x)
    s = table.entries @ e
    exps = k + 1j * alphas
    s2 = table.entries @ ((exps**2) * e)
    base = cmath.exp(k * x)
    f = base * (1.0 + complex(np.dot(weights, s)))
    f2d = base * (k * k + complex(np.dot(weights, s2)))

    rho = 1.0 if x >= 0 else -(potential.beta**2)
    return -f2d + potential.at(x) * f - lam * lam * rho * f


def extend_across_zero(
    table: CoefficientTable,
    potential: FourierPotential,
    lam: complex,
    x: float,
    pole_tol: float = POLE_TOL,
) -> SolutionSample:
    """Continue a solution across the density jump at x = 0.

    For x >= 0 returns the continuation of the plus exponential-family
    solution (natively defined on x < 0); for x < 0 the continuation of the
    plus oscillatory-family solution.  The continuation is the combination
    of the other family fixed by matching value and derivative at 0, so at
    x = 0 it reproduces the native evaluation exactly.
    """
    from .scattering import connection_coefficients

    lam = complex(lam)
    if abs(lam) < pole_tol:
        raise ZeroWavenumber("connection coefficients are undefined at lambda = 0")
    cc = connection_coefficients(table, potential.beta, lam, pole_tol=pole_tol)
    if x >= 0:
        sp = eval_f1(table, lam, x, "+", pole_tol)
        sm = eval_f1(table, lam, x, "-", pole_tol)
        # the stored coefficients carry the sign of the large-lambda
        # normalisation, which is opposite to the matching combination
        value = -(cc.c11 * sp.value + cc.c12 * sm.value)
        derivative = -(cc.c11 * sp.derivative + cc.c12 * sm.derivative)
        err = abs(cc.c11) * sp.truncation_error + abs(cc.c12) * sm.truncation_error
    else:
        sp = eval_f2(table, potential.beta, lam, x, "+", pole_tol)
        sm = eval_f2(table, potential.beta, lam, x, "-", pole_tol)
        value = -(cc.c22 * sp.value + cc.c21 * sm.value)
        derivative = -(cc.c22 * sp.derivative + cc.c21 * sm.derivative)
        err = abs(cc.c22) * sp.truncation_error + abs(cc.c21) * sm.truncation_error
    return SolutionSample(value, derivative, err)
