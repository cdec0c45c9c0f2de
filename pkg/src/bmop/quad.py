"""Half-line quadrature tuned to exp(-rate*sqrt(x)) decay, the closed-form
cross moment of the two weight families, and biorthogonality matrices.

The substitution x = u^2 turns the sqrt-exponential decay into a plain
exponential and regularizes the integrable x^mu singularity at the origin,
so composite Gauss-Legendre panels in u converge spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp
from scipy import special as sp

from .errors import DomainError, NonConvergence
from .precision import LogValue
from .specfun import Params, log_gamma
from . import mopoly


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    panel_order: int = 40
    max_doublings: int = 30

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise DomainError("rel_tol must be positive")
        if self.panel_order < 4:
            raise DomainError("panel_order must be >= 4")


@dataclass
class BiorthReport:
    size: int
    matrix: np.ndarray
    max_offdiag_abs: float = field(init=False)
    max_diag_dev: float = field(init=False)

    def __post_init__(self):
        m = self.matrix
        if not np.all(np.isfinite(m)):
            raise NonConvergence("biorthogonality matrix has non-finite entries")
        off = m - np.diag(np.diag(m))
        self.max_offdiag_abs = float(np.max(np.abs(off))) if self.size > 1 else 0.0
        self.max_diag_dev = float(np.max(np.abs(np.diag(m) - 1.0)))


@lru_cache(maxsize=64)
def _gauss_rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _graded_edges(u_max, n_panels: int, levels: int):
    """Uniform panel edges with the first panel refined geometrically.

    Integer-order second-kind weights carry x^k log x terms at the origin;
    a geometrically graded mesh restores exponential convergence there at
    the cost of `levels` extra panels.
    """
    first = u_max / n_panels
    edges = [first * 2.0 ** (-k) for k in range(levels, 0, -1)]
    return [u_max * 0.0] + edges + [u_max * k / n_panels for k in range(1, n_panels + 1)]


def panel_nodes(u_max: float, n_panels: int, order: int, levels: int = 25):
    """Gauss-Legendre nodes/weights on [0, u_max], graded toward 0."""
    nodes, weights = _gauss_rule(order)
    edges = np.array(_graded_edges(float(u_max), n_panels, levels))
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    us = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return us, ws


def _legendre_pd(n: int, x):
    """Legendre P_n(x) and its derivative by the three-term recurrence."""
    p0, p1 = mp.mpf(1), x
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1, n * (x * p1 - p0) / (x * x - 1)


@lru_cache(maxsize=16)
def _gauss_rule_mp(order: int, bits: int):
    """Gauss-Legendre rule with nodes Newton-refined to the given precision.

    Double-precision nodes are not enough when the integrand's absolute mass
    dwarfs the value of the integral; node jitter at 1e-16 then shows up as
    an irreducible error floor.
    """
    nodes0, _ = _gauss_rule(order)
    nodes, weights = [], []
    with mp.workprec(bits + 40):
        for x0 in nodes0:
            x = mp.mpf(float(x0))
            for _ in range(4):
                pn, dpn = _legendre_pd(order, x)
                x -= pn / dpn
            _, dpn = _legendre_pd(order, x)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dpn * dpn))
    return tuple(nodes), tuple(weights)


def panel_nodes_mp(u_max: float, n_panels: int, order: int, bits: int,
                   levels: int = 30):
    """Graded panel Gauss-Legendre nodes/weights on [0, u_max] as mpf lists."""
    nodes, weights = _gauss_rule_mp(order, bits)
    with mp.workprec(bits + 40):
        edges = [mp.mpf(e) for e in _graded_edges(mp.mpf(u_max), n_panels, levels)]
        us, ws = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = (lo + hi) / 2, (hi - lo) / 2
            for x, w in zip(nodes, weights):
                us.append(mid + half * x)
                ws.append(half * w)
    return us, ws


def _eval_vec(f, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except Exception:
        pass
    return np.array([float(f(float(xi)) ) for xi in x])


def integrate_half_line(f, decay_rate: float, cfg: QuadConfig = QuadConfig()) -> float:
    """Integral of f over (0, inf) for integrands bounded by
    C x^p exp(-decay_rate sqrt(x)).

    Substitutes x = u^2, integrates 2 u f(u^2) on [0, U] by panel-wise Gauss
    and doubles U until the analytic tail bound drops below abs_tol.  A
    panel-refinement stability check guards the resolved part.
    """
    if decay_rate <= 0:
        raise DomainError("decay_rate must be positive")
    u_max = max(8.0 / decay_rate, 2.0)
    tail_ok = False
    for _ in range(cfg.max_doublings):
        fx = abs(float(f(u_max * u_max)))
        # |f| beyond U^2 modelled as f(U^2) * exp(-rate (u - U)) in u
        tail = 2.0 * fx * (u_max / decay_rate + 1.0 / decay_rate ** 2)
        if tail < cfg.abs_tol:
            tail_ok = True
            break
        u_max *= 2.0
    if not tail_ok:
        raise NonConvergence("tail bound not reached within max_doublings")

    n_panels = max(8, int(math.ceil(u_max)))
    prev = None
    for _ in range(cfg.max_doublings):
        us, ws = panel_nodes(u_max, n_panels, cfg.panel_order)
        vals = _eval_vec(f, us * us)
        result = float(np.dot(ws, 2.0 * us * vals))
        if prev is not None and abs(result - prev) <= cfg.rel_tol * max(abs(result), cfg.abs_tol / cfg.rel_tol):
            return result
        prev = result
        n_panels *= 2
    raise NonConvergence("panel refinement did not stabilize within max_doublings")


def moment_closed(p: Params, i: int, j: int) -> LogValue:
    """Closed form of the cross moment of the two weight families:
    a^(mu+i) b^(nu+j) Gamma(mu+nu+1+i+j) / (2 (b^2-a^2)^(mu+nu+1+i+j))."""
    if i < 0 or j < 0:
        raise DomainError("moment orders must be >= 0")
    s = p.mu + p.nu + 1.0 + i + j
    lg = ((p.mu + i) * math.log(p.a) + (p.nu + j) * math.log(p.b)
          + log_gamma(s).log_magnitude - math.log(2.0) - s * math.log(p.gap))
    return LogValue(lg, 1)


def moment_quad(p: Params, i: int, j: int, cfg: QuadConfig = QuadConfig()) -> float:
    """Cross moment of the shifted weights by direct quadrature.

    The integrand is positive with no cancellation, so plain double
    precision through the scaled scipy Bessel routines is enough.
    """
    if i < 0 or j < 0:
        raise DomainError("moment orders must be >= 0")

    def f(x):
        x = np.asarray(x, dtype=float)
        zi = 2.0 * p.a * np.sqrt(x)
        zk = 2.0 * p.b * np.sqrt(x)
        return (sp.ive(p.mu + i, zi) * sp.kve(p.nu + j, zk)
                * np.exp(zi - zk) * x ** (0.5 * (p.mu + p.nu + i + j)))

    return integrate_half_line(f, 2.0 * (p.b - p.a), cfg)


def _moment_mp(p: Params, i: int, j: int):
    s = mp.mpf(p.mu) + p.nu + 1 + i + j
    gap = mp.mpf(p.b) ** 2 - mp.mpf(p.a) ** 2
    return (mp.mpf(p.a) ** (p.mu + i) * mp.mpf(p.b) ** (p.nu + j)
            * mpmath.gamma(s) / (2 * gap ** s))


def biorth_matrix_moments(p: Params, N: int, dps: int = 60) -> BiorthReport:
    """Quadrature-free biorthogonality matrix via the closed-form moments,
    evaluated in extended precision (finite gamma sums, no truncation)."""
    with mp.workprec(int(dps * 3.33)):
        moments = [[_moment_mp(p, i, j) for j in range(N)] for i in range(N)]
        qc = [mopoly._q_coeffs_mp(p, n) for n in range(N)]
        pc = [mopoly._p_coeffs_mp(p, m) for m in range(N)]
        out = np.empty((N, N))
        for n in range(N):
            for m in range(N):
                acc = mpmath.fsum(qc[n][i] * pc[m][j] * moments[i][j]
                                  for i in range(n + 1) for j in range(m + 1))
                out[n, m] = float(acc)
    return BiorthReport(N, out)


def biorth_matrix(p: Params, N: int, cfg: QuadConfig = QuadConfig(),
                  bits: int = 200) -> BiorthReport:
    """Biorthogonality matrix by direct quadrature of Q_n * P_m.

    All N^2 entries share one node set; the integrands share the decay rate
    2(b-a) in sqrt(x), so a single tail bound covers the whole matrix.  The
    weight tables at the nodes are built in extended precision because the
    basis expansions cancel catastrophically for larger n.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    rate = 2.0 * (p.b - p.a)
    # scale of the largest oscillation region among n < N
    _, x_hi = mopoly.sign_change_window(p, N - 1)
    u_max = max(8.0 / rate, 2.0) * (1.0 + (p.mu + p.nu + N) / 4.0)
    u_max = max(u_max, math.sqrt(x_hi))
    # extend until the product tail bound is comfortably below abs_tol
    for _ in range(cfg.max_doublings):
        log_tail = _log_product_tail(p, N - 1, u_max)
        if log_tail < math.log(cfg.abs_tol) - 5.0:
            break
        u_max *= 1.5
    else:
        raise NonConvergence("biorth tail bound not reached")

    n_panels = max(16, int(math.ceil(u_max)))
    us, ws = panel_nodes_mp(u_max, n_panels, cfg.panel_order, bits)
    with mp.workprec(bits):
        xs = [u * u for u in us]
        grid = mopoly.WeightGrid(p, N - 1, xs, bits=bits)
        # the absolute mass of the off-diagonal integrands reaches 1e10
        # while the integral is 0, so nodes, weights and the accumulation
        # all have to run above double or rounding alone blows the budget
        w2u = [w * 2 * u for w, u in zip(ws, us)]
        qv = [grid.q_values_mp(n) for n in range(N)]
        pv = [grid.p_values_mp(m) for m in range(N)]
        qw = [[q * w for q, w in zip(row, w2u)] for row in qv]
        out = np.empty((N, N))
        for n in range(N):
            for m in range(N):
                out[n, m] = float(mpmath.fsum(q * r for q, r in zip(qw[n], pv[m])))
    return BiorthReport(N, out)


def _log_product_tail(p: Params, n: int, u: float) -> float:
    """log of a crude bound on |Q_n * P_n| tail mass beyond x = u^2."""
    # Q_n grows like x^((2(mu+n)-1)/4) e^{2a sqrt x} times its leading
    # coefficient; P_n decays like e^{-2b sqrt x}
    lead_q = n * math.log(p.gap / p.a) if n else 0.0
    lead_p = mopoly.normalization_c(p, n).value.log_magnitude + \
        log_gamma(p.mu + p.nu + 1.0).log_magnitude
    x = u * u
    log_env = (lead_q + lead_p + 0.5 * (p.mu + p.nu + 2 * n) * math.log(max(x, 1.0))
               - 2.0 * (p.b - p.a) * u)
    rate = 2.0 * (p.b - p.a)
    return log_env + math.log(2.0 * (u / rate + 1.0 / rate ** 2))


def q_rho_moment(p: Params, n: int, j: int) -> float:
    """Integral of Q_n against the (nu+j)-shifted second-kind weight via the
    closed-form moments (vanishes for j < n)."""
    with mp.workprec(200):
        qc = mopoly._q_coeffs_mp(p, n)
        return float(mpmath.fsum(qc[i] * _moment_mp(p, i, j) for i in range(n + 1)))


def q_rho_moment_scale(p: Params, n: int, j: int) -> float:
    """Largest |term| in q_rho_moment, for relative-vanishing checks."""
    with mp.workprec(200):
        qc = mopoly._q_coeffs_mp(p, n)
        return float(max(abs(qc[i] * _moment_mp(p, i, j)) for i in range(n + 1)))
