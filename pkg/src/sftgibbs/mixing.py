"""Past/future factorization gaps and trajectory averages.

The witness of asymptotic independence is the gap
|mu(E and shifted F) - mu(E) mu(F)| for a past cylinder E (coordinates
<= 0) and a future cylinder F (coordinates >= 1) pushed n steps further
away.  For the exact Markov representation the gap decays geometrically
at the modulus of the subdominant eigenvalue of the stochastic matrix;
the reported bound calibrates the constant at n = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSupport
from .gibbs import GibbsMeasureModel, cylinder_measure, sample_trajectory
from .sft import Cylinder, merge_cylinders

RHO_TOL = 1e-12
RHO_CAP = 200_000


def second_eigenvalue_modulus(P: np.ndarray, pi: np.ndarray, tol: float = RHO_TOL) -> float:
    """|second eigenvalue| of a stochastic matrix via deflated power iteration.

    The dominant pair (eigenvalue 1, the stationary projector) is deflated
    exactly; power iteration on the remainder converges to the subdominant
    modulus when that eigenvalue is real.  If the norm sequence keeps
    oscillating (a complex pair), fall back to a dense eigenvalue solve.
    """
    n = P.shape[0]
    if n == 1:
        return 0.0
    B = P - np.outer(np.ones(n), pi)
    v = np.zeros(n)
    v[0] = 1.0
    v = v - pi
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = np.ones(n) / n
    else:
        v /= norm
    prev = (np.inf, np.inf)
    for _ in range(RHO_CAP):
        w = B @ v
        s = float(np.linalg.norm(w))
        if s < 1e-250:
            return 0.0
        v = w / s
        if abs(s - prev[0]) <= tol * max(1.0, s) and abs(s - prev[1]) <= tol * max(1.0, s):
            return s
        prev = (s, prev[0])
    return float(np.abs(np.linalg.eigvals(B)).max())


@dataclass(frozen=True)
class FactorizationGap:
    """Gap at separation n with its calibrated geometric bound."""

    n: int
    gap: float
    rate_bound: float
    rho: float


def _past_future_measures(gm: GibbsMeasureModel, past: Cylinder, future: Cylinder, n: int):
    if n < 0:
        raise BadSupport("separation must be >= 0")
    span_p = past.span()
    if span_p is not None and span_p[1] > 0:
        raise BadSupport("past cylinder must constrain coordinates <= 0")
    span_f = future.span()
    if span_f is not None and span_f[0] < 1:
        raise BadSupport("future cylinder must constrain coordinates >= 1")
    joint = merge_cylinders(past, future.shifted(n))
    mu_e = cylinder_measure(gm, past).value
    mu_f = cylinder_measure(gm, future).value
    mu_joint = 0.0 if joint is None else cylinder_measure(gm, joint).value
    return mu_e, mu_f, mu_joint


def factorization_gap(gm: GibbsMeasureModel, past: Cylinder, future: Cylinder, n: int) -> FactorizationGap:
    """|mu(E and S^{-n}F) - mu(E) mu(F)| with the spectral rate bound.

    The bound is gap(1) * rho^(n-1): exact geometric decay calibrated at
    separation 1.
    """
    mu_e, mu_f, mu_joint = _past_future_measures(gm, past, future, n)
    gap = abs(mu_joint - mu_e * mu_f)
    _, _, joint1 = _past_future_measures(gm, past, future, 1)
    gap1 = abs(joint1 - mu_e * mu_f)
    rho = second_eigenvalue_modulus(gm.stochastic, gm.stationary)
    bound = 0.0 if rho == 0.0 else gap1 * rho ** (n - 1)
    return FactorizationGap(n=n, gap=gap, rate_bound=bound, rho=rho)


def max_gap_decay(gm: GibbsMeasureModel, n_values) -> list[FactorizationGap]:
    """Worst gap over all single-symbol past/future pairs, per separation.

    Past events fix coordinate 0, future events coordinate 1; the bound
    again calibrates the n = 1 worst gap.
    """
    symbols = list(gm.source_model.symbols())
    pairs = [
        (Cylinder({0: {e}}), Cylinder({1: {f}}))
        for e in symbols
        for f in symbols
    ]
    rho = second_eigenvalue_modulus(gm.stochastic, gm.stationary)

    def worst(n: int) -> float:
        best = 0.0
        for past, future in pairs:
            mu_e, mu_f, mu_joint = _past_future_measures(gm, past, future, n)
            best = max(best, abs(mu_joint - mu_e * mu_f))
        return best

    gap1 = worst(1)
    rows = []
    for n in n_values:
        gap = worst(int(n))
        bound = 0.0 if rho == 0.0 else gap1 * rho ** (int(n) - 1)
        rows.append(FactorizationGap(n=int(n), gap=gap, rate_bound=bound, rho=rho))
    return rows


def decay_slope(rows, n_lo: int = 2, n_hi: int = 20, floor: float = 1e-13):
    """Least-squares slope of log(gap) vs n over rows with gap above the floor.

    Returns None when fewer than two usable points remain.
    """
    xs = [row.n for row in rows if n_lo <= row.n <= n_hi and row.gap > floor]
    ys = [np.log(row.gap) for row in rows if n_lo <= row.n <= n_hi and row.gap > floor]
    if len(xs) < 2:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def birkhoff_average(gm: GibbsMeasureModel, cylinder: Cylinder, Q: int, seed: int) -> float:
    """Occurrence frequency of the cylinder pattern along a seeded sample.

    One trajectory of length Q plus the pattern span is drawn; the pattern
    (constraints taken relative to their leftmost position) is tested at Q
    consecutive start positions.  Converges to the cylinder measure by
    ergodicity of the mixing chain.
    """
    if Q < 1:
        raise BadSupport("Q must be >= 1")
    if cylinder.is_trivial:
        return 1.0
    lo, hi = cylinder.span()
    span = hi - lo + 1
    traj = np.asarray(sample_trajectory(gm, Q + span, seed).symbols)
    hits = np.ones(Q, dtype=bool)
    starts = np.arange(Q)
    for pos, syms in cylinder.constraints.items():
        allowed = np.zeros(gm.source_model.alphabet_size, dtype=bool)
        for s in syms:
            if 0 <= s < allowed.size:
                allowed[s] = True
        hits &= allowed[traj[starts + (pos - lo)]]
    return float(hits.sum() / Q)
