"""Five-term recurrence relations for the linear forms Q_n and their duals
P_n: closed-form coefficients, forward recursion, and residual diagnostics.

Neither family consists of polynomials, but both satisfy banded recurrences
in the degree index with fully explicit coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, PrecisionLossWarning
from .precision import DOUBLE, PrecisionConfig
from .mopoly import q_eval, p_eval
from .specfun import Params


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of x f_n = a2 f_{n+2} + a1 f_{n+1} + a0 f_n
    + am1 f_{n-1} + am2 f_{n-2}."""

    n: int
    a2: float
    a1: float
    a0: float
    am1: float
    am2: float

    def as_tuple(self) -> tuple:
        return (self.a2, self.a1, self.a0, self.am1, self.am2)


def q_recurrence_coeffs(p: Params, n: int) -> RecurrenceCoeffs:
    """Closed-form coefficients of the Q recurrence at index n.

    The down-shift coefficient carries the factor 2(mu+nu+2n); the
    functional residual pins this at machine precision whereas the
    n-independent variant fails immediately.
    """
    if n < 0:
        raise DomainError("recurrence index must be >= 0")
    g = p.gap
    ga = (p.a / g) ** 2
    gb = (p.b / g) ** 2
    mu, nu = p.mu, p.nu
    s = mu + nu
    a2 = ga
    a1 = 2.0 * (s + 2 * n + 2) * ga + (mu + n + 1) / g
    a0 = ((6.0 * n * n + 6.0 * (s + 1) * n + (s + 1) * (s + 2)) * ga
          + (3.0 * n * n + (4 * mu + 2 * nu + 3) * n + (mu + 1) * (s + 1)) / g)
    am1 = n * (s + n) * (2.0 * (s + 2 * n) * gb - (nu + n) / g)
    am2 = (n - 1.0) * n * (s + n - 1) * (s + n) * gb
    return RecurrenceCoeffs(n, a2, a1, a0, am1, am2)


def p_recurrence_coeffs(p: Params, n: int) -> RecurrenceCoeffs:
    """Dual coefficients b_{i,n} = a_{-i,n+i}; negative shifted indices give
    zero through the initial conditions."""
    if n < 0:
        raise DomainError("recurrence index must be >= 0")

    def a(i: int, m: int) -> float:
        if m < 0:
            return 0.0
        c = q_recurrence_coeffs(p, m)
        return {2: c.a2, 1: c.a1, 0: c.a0, -1: c.am1, -2: c.am2}[i]

    return RecurrenceCoeffs(
        n,
        a2=a(-2, n + 2),
        a1=a(-1, n + 1),
        a0=a(0, n),
        am1=a(1, n - 1),
        am2=a(2, n - 2),
    )


_GROWTH_LIMIT = 1e10


def q_forward(p: Params, n_max: int, x: float,
              precision: PrecisionConfig = DOUBLE) -> list:
    """Q_0(x)..Q_{n_max}(x) by forward recursion.

    Fast but of unproven stability; a running growth factor is tracked and
    a PrecisionLossWarning is issued once it crosses 1e10, at which point
    roughly ten digits may be gone.
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if x <= 0:
        raise DomainError("q_forward requires x > 0")
    vals = [q_eval(p, 0, x, precision)]
    if n_max >= 1:
        vals.append(q_eval(p, 1, x, precision))
    growth = 1.0
    warned = False
    for n in range(n_max - 1):
        c = q_recurrence_coeffs(p, n)
        rhs_terms = [x * vals[n], -c.a1 * vals[n + 1], -c.a0 * vals[n]]
        if n >= 1:
            rhs_terms.append(-c.am1 * vals[n - 1])
        if n >= 2:
            rhs_terms.append(-c.am2 * vals[n - 2])
        nxt = math.fsum(rhs_terms) / c.a2
        scale = max(abs(t) for t in rhs_terms)
        if abs(nxt) > 0:
            growth *= max(1.0, scale * (1.0 / c.a2) / abs(nxt))
        if growth > _GROWTH_LIMIT and not warned:
            warnings.warn(f"forward recurrence growth factor {growth:.2e} at n={n + 2}",
                          PrecisionLossWarning)
            warned = True
        vals.append(nxt)
    return vals[:n_max + 1]


def p_forward(p: Params, n_max: int, x: float,
              precision: PrecisionConfig = DOUBLE) -> list:
    """P_0(x)..P_{n_max}(x) by forward recursion with the dual coefficients."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if x <= 0:
        raise DomainError("p_forward requires x > 0")
    vals = [p_eval(p, 0, x, precision)]
    if n_max >= 1:
        vals.append(p_eval(p, 1, x, precision))
    growth = 1.0
    warned = False
    for n in range(n_max - 1):
        c = p_recurrence_coeffs(p, n)
        rhs_terms = [x * vals[n], -c.a1 * vals[n + 1], -c.a0 * vals[n]]
        if n >= 1:
            rhs_terms.append(-c.am1 * vals[n - 1])
        if n >= 2:
            rhs_terms.append(-c.am2 * vals[n - 2])
        nxt = math.fsum(rhs_terms) / c.a2
        scale = max(abs(t) for t in rhs_terms)
        if abs(nxt) > 0:
            growth *= max(1.0, scale * (1.0 / c.a2) / abs(nxt))
        if growth > _GROWTH_LIMIT and not warned:
            warnings.warn(f"forward recurrence growth factor {growth:.2e} at n={n + 2}",
                          PrecisionLossWarning)
            warned = True
        vals.append(nxt)
    return vals[:n_max + 1]


def q_residual(p: Params, n: int, x: float,
               precision: PrecisionConfig = DOUBLE) -> float:
    """|x Q_n - sum of recurrence terms| relative to the largest term,
    everything by direct evaluation."""
    c = q_recurrence_coeffs(p, n)
    vals = {k: (q_eval(p, k, x, precision) if k >= 0 else 0.0)
            for k in range(n - 2, n + 3)}
    terms = [c.a2 * vals[n + 2], c.a1 * vals[n + 1], c.a0 * vals[n],
             c.am1 * vals[n - 1], c.am2 * vals[n - 2]]
    lhs = x * vals[n]
    scale = max(abs(lhs), max(abs(t) for t in terms))
    return abs(lhs - math.fsum(terms)) / scale


def p_residual(p: Params, n: int, x: float,
               precision: PrecisionConfig = DOUBLE) -> float:
    """Dual residual with the b coefficients."""
    c = p_recurrence_coeffs(p, n)
    vals = {k: (p_eval(p, k, x, precision) if k >= 0 else 0.0)
            for k in range(n - 2, n + 3)}
    terms = [c.a2 * vals[n + 2], c.a1 * vals[n + 1], c.a0 * vals[n],
             c.am1 * vals[n - 1], c.am2 * vals[n - 2]]
    lhs = x * vals[n]
    scale = max(abs(lhs), max(abs(t) for t in terms))
    return abs(lhs - math.fsum(terms)) / scale
