"""Permutation cocycles and Radon-Nikodym sandwich checks.

For a finite-support permutation tau and a finite-range potential, the
cocycle

    G_N(x) = sum_{q=-N}^{N-1} ( phi(shifted permuted x at q) - phi(shifted x at q) )

is a finite sum that stops changing once N clears the support radius plus
the range: only summands whose coordinate block meets the support
contribute.  G splits into a past part H (summands at q <= -M) and a
forward part F (the rest); F is constant in N, and |G_N| is uniformly
bounded by max |F| plus the summed variation tail.  On cylinders over a
permutation-invariant window the measure ratio mu(preimage)/mu(cylinder)
is sandwiched between (c1/c2) e^{-C} and (c2/c1) e^{C}, and its logarithm
matches the cocycle limit up to log(c2/c1).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import (
    NotInvolution,
    NullCylinder,
    RangeMismatch,
    WindowTooSmall,
)
from .gibbs import GibbsMeasureModel, cylinder_measure, word_cylinder_measures
from .permutations import FiniteSupportPermutation, WindowConfiguration
from .potentials import FiniteRangePotential, decay_envelope
from .sft import Cylinder, SftModel, word_array


@dataclass(frozen=True)
class CocycleEvaluation:
    """One partial sum of the cocycle, split into past and forward parts.

    ``stabilized`` marks N >= support radius + range, past which the value
    equals the full two-sided sum exactly: every farther summand vanishes
    identically for a finite-range potential.
    """

    N: int
    value: float
    stabilized: bool
    h_part: float
    f_part: float


def _term(
    phi: FiniteRangePotential,
    tau: FiniteSupportPermutation,
    window: WindowConfiguration,
    q: int,
) -> Optional[float]:
    """phi(permuted block at q) - phi(block at q); None when tau fixes the block."""
    r = phi.range
    if all(tau(q + i) == q + i for i in range(r)):
        return None
    orig = tuple(window.at(q + i) for i in range(r))
    perm = tuple(window.at(tau(q + i)) for i in range(r))
    return phi(perm) - phi(orig)


def permutation_cocycle(
    model: SftModel,
    phi: FiniteRangePotential,
    tau: FiniteSupportPermutation,
    window: WindowConfiguration,
    N: int,
) -> CocycleEvaluation:
    """Exact partial sum over q in [-N, N-1].

    Summands on blocks the permutation fixes vanish without touching the
    window, so the window only needs the coordinates of the non-fixed
    blocks and their images; anything less raises ``WindowTooSmall``.
    """
    if N < 1:
        raise WindowTooSmall("N must be >= 1")
    M = tau.support_radius
    h = 0.0
    f = 0.0
    for q in range(-N, N):
        term = _term(phi, tau, window, q)
        if term is None:
            continue
        if q <= -M:
            h += term
        else:
            f += term
    return CocycleEvaluation(
        N=N, value=h + f, stabilized=N >= M + phi.range, h_part=h, f_part=f
    )


def cocycle_limit(
    model: SftModel,
    phi: FiniteRangePotential,
    tau: FiniteSupportPermutation,
    window: WindowConfiguration,
) -> float:
    """The full two-sided sum, reached exactly at N = support radius + range."""
    N = max(1, tau.support_radius + phi.range)
    return permutation_cocycle(model, phi, tau, window, N).value


def _forward_part_max(
    model: SftModel,
    phi: FiniteRangePotential,
    tau: FiniteSupportPermutation,
) -> float:
    """Exact max of |F| over windows admissible together with their image.

    F depends on the finitely many coordinates [-M+1, M+r-2]; windows whose
    permuted blocks leave the admissible language are outside the domain
    and do not enter the supremum.
    """
    M = tau.support_radius
    r = phi.range
    if M == 0 or r == 1:
        return 0.0
    lo, hi = -M + 1, M + r - 2
    words = word_array(model, hi - lo + 1)
    qs = [
        q
        for q in range(-M + 1, M)
        if not all(tau(q + i) == q + i for i in range(r))
    ]
    if not qs:
        return 0.0
    if r == 2:
        n = model.alphabet_size
        lut = np.full((n, n), np.nan)
        for w, v in phi.table.items():
            lut[w[0], w[1]] = v
        F = np.zeros(words.shape[0])
        for q in qs:
            c0, c1 = q - lo, q + 1 - lo
            p0, p1 = tau(q) - lo, tau(q + 1) - lo
            F += lut[words[:, p0], words[:, p1]] - lut[words[:, c0], words[:, c1]]
        valid = np.isfinite(F)
        return float(np.abs(F[valid]).max()) if valid.any() else 0.0
    best = 0.0
    for row in words:
        win = WindowConfiguration(lo, tuple(int(s) for s in row))
        try:
            F = sum(
                t for q in qs if (t := _term(phi, tau, win, q)) is not None
            )
        except RangeMismatch:
            continue
        best = max(best, abs(F))
    return best


def cocycle_bound(
    model: SftModel,
    phi: FiniteRangePotential,
    tau: FiniteSupportPermutation,
    alpha: float = 0.5,
) -> float:
    """Uniform bound C with |G_N| <= C for all N >= support radius.

    The past part is dominated by the summed variation tail b/(1-alpha);
    the forward part is maximized exactly over its finitely many
    coordinates.
    """
    env = decay_envelope(model, phi, alpha)
    return _forward_part_max(model, phi, tau) + env.tail_bound


def pullback_cylinder(sigma: FiniteSupportPermutation, cylinder: Cylinder) -> Cylinder:
    """Preimage of a cylinder under the coordinate action of sigma.

    The permuted point satisfies ``value at p in A`` exactly when the
    original satisfies it at position sigma(p).
    """
    return Cylinder({sigma(p): syms for p, syms in cylinder.constraints.items()})


def rn_ratio(gm: GibbsMeasureModel, sigma: FiniteSupportPermutation, cylinder: Cylinder) -> float:
    """mu(preimage of C under sigma's action) / mu(C).

    Zero when the preimage is inadmissible; ``NullCylinder`` when mu(C)=0.
    """
    mu_c = cylinder_measure(gm, cylinder).value
    if mu_c == 0.0:
        raise NullCylinder("cylinder has measure zero")
    return cylinder_measure(gm, pullback_cylinder(sigma, cylinder)).value / mu_c


def _permuted_columns(sigma: FiniteSupportPermutation, N: int) -> list[int]:
    return [sigma(j) + N for j in range(-N, N + 1)]


def _cocycle_column(
    gm: GibbsMeasureModel,
    sigma: FiniteSupportPermutation,
    words: np.ndarray,
    permuted: np.ndarray,
    N: int,
) -> np.ndarray:
    """Cocycle limit per row, NaN where not computable from the window."""
    phi = gm.potential
    r = phi.range
    n = gm.source_model.alphabet_size
    rows = words.shape[0]
    M = sigma.support_radius
    if r == 1:
        lut = np.zeros(n)
        for w, v in phi.table.items():
            lut[w[0]] = v
        cols = slice(0, 2 * N)
        return lut[permuted[:, cols]].sum(axis=1) - lut[words[:, cols]].sum(axis=1)
    if r == 2:
        lut = np.full((n, n), np.nan)
        for w, v in phi.table.items():
            lut[w[0], w[1]] = v
        g = np.zeros(rows)
        for c in range(2 * N):
            g += lut[permuted[:, c], permuted[:, c + 1]] - lut[words[:, c], words[:, c + 1]]
        return g
    if N < M + r - 2:
        return np.full(rows, np.nan)
    out = np.empty(rows)
    for i in range(rows):
        win = WindowConfiguration(-N, tuple(int(s) for s in words[i]))
        try:
            out[i] = cocycle_limit(gm.source_model, phi, sigma, win)
        except (RangeMismatch, WindowTooSmall):
            out[i] = np.nan
    return out


@dataclass(eq=False)
class QuasiInvarianceReport:
    """Sandwich check over every admissible word cylinder on [-N, N].

    Arrays are aligned row-for-row with ``words``; cylinders whose
    permuted word leaves the language are excluded from ratio checks and
    only counted.  ``vacuous`` flags an empty admissibility domain at this
    window size: there is nothing to check and the run passes by
    convention, but reports always carry the flag.
    """

    N: int
    alpha: float
    alpha_bound: float
    beta_bound: float
    cocycle_bound: float
    c1: float
    c2: float
    words: np.ndarray
    mu: np.ndarray
    mu_preimage: np.ndarray
    ratio: np.ndarray
    cocycle: np.ndarray
    in_domain: np.ndarray
    row_ok: np.ndarray
    excluded: int
    union_checks: int
    union_violations: int
    subset_seed: int

    @property
    def violations(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.in_domain & ~self.row_ok)[0]]

    @property
    def vacuous(self) -> bool:
        return not bool(self.in_domain.any())

    @property
    def passed(self) -> bool:
        return not self.violations and self.union_violations == 0

    def rows(self) -> Iterator[tuple]:
        for i in range(self.words.shape[0]):
            word = tuple(int(s) for s in self.words[i])
            in_dom = bool(self.in_domain[i])
            yield (
                word,
                float(self.mu[i]),
                float(self.mu_preimage[i]),
                float(self.ratio[i]) if in_dom else None,
                float(np.log(self.ratio[i])) if in_dom else None,
                float(self.cocycle[i]) if in_dom and np.isfinite(self.cocycle[i]) else None,
                in_dom,
                bool(self.row_ok[i]) if in_dom else None,
            )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["word", "mu", "mu_preimage", "ratio", "log_ratio", "cocycle", "in_domain", "pass"]
        )
        for word, mu, mup, ratio, logr, coc, in_dom, ok in self.rows():
            writer.writerow(
                [
                    "".join(map(str, word)),
                    repr(mu),
                    repr(mup),
                    "" if ratio is None else repr(ratio),
                    "" if logr is None else repr(logr),
                    "" if coc is None else repr(coc),
                    int(in_dom),
                    "" if ok is None else int(ok),
                ]
            )
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "N": self.N,
            "alpha": self.alpha,
            "alpha_bound": self.alpha_bound,
            "beta_bound": self.beta_bound,
            "cocycle_bound": self.cocycle_bound,
            "c1": self.c1,
            "c2": self.c2,
            "cylinders": int(self.words.shape[0]),
            "checked": int(self.in_domain.sum()),
            "excluded": self.excluded,
            "violations": len(self.violations),
            "union_checks": self.union_checks,
            "union_violations": self.union_violations,
            "subset_seed": self.subset_seed,
            "vacuous": self.vacuous,
            "pass": self.passed,
        }


def _setup_window_sweep(gm: GibbsMeasureModel, sigma: FiniteSupportPermutation, N: int):
    if not sigma.is_involution:
        raise NotInvolution("check is defined for involutions")
    if N < sigma.support_radius:
        raise WindowTooSmall(
            f"N={N} below support radius {sigma.support_radius}"
        )
    words = word_array(gm.source_model, 2 * N + 1)
    permuted = words[:, _permuted_columns(sigma, N)]
    mu = word_cylinder_measures(gm, words)
    mu_p = word_cylinder_measures(gm, permuted)
    return words, permuted, mu, mu_p


def verify_quasi_invariance(
    gm: GibbsMeasureModel,
    sigma: FiniteSupportPermutation,
    N: int,
    alpha: float = 0.5,
    subset_checks: int = 32,
    subset_seed: int = 0,
) -> QuasiInvarianceReport:
    """Check alpha <= mu(preimage)/mu(C) <= beta on all word cylinders on [-N, N].

    The bounds are assembled from the swept constants and the cocycle
    bound.  Unions of in-domain cylinders are re-checked (the bounds
    survive finite additivity): the union of all of them plus seeded
    random subsets.
    """
    words, permuted, mu, mu_p = _setup_window_sweep(gm, sigma, N)
    C = cocycle_bound(gm.source_model, gm.potential, sigma, alpha)
    c1, c2 = gm.gibbs_constants
    alpha_bound = (c1 / c2) * math.exp(-C)
    beta_bound = (c2 / c1) * math.exp(C)

    in_domain = mu_p > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(in_domain, mu_p / mu, np.nan)
    row_ok = np.zeros(len(mu), dtype=bool)
    row_ok[in_domain] = (ratio[in_domain] >= alpha_bound) & (ratio[in_domain] <= beta_bound)

    cocycle = _cocycle_column(gm, sigma, words, permuted, N)

    rng = np.random.default_rng(subset_seed)
    union_checks = 0
    union_violations = 0
    if in_domain.any():
        masks = [in_domain]
        for _ in range(max(0, subset_checks - 1)):
            masks.append(in_domain & (rng.random(len(mu)) < 0.5))
        for mask in masks:
            if not mask.any():
                continue
            union_checks += 1
            u_ratio = mu_p[mask].sum() / mu[mask].sum()
            if not (alpha_bound <= u_ratio <= beta_bound):
                union_violations += 1

    return QuasiInvarianceReport(
        N=N,
        alpha=alpha,
        alpha_bound=alpha_bound,
        beta_bound=beta_bound,
        cocycle_bound=C,
        c1=c1,
        c2=c2,
        words=words,
        mu=mu,
        mu_preimage=mu_p,
        ratio=ratio,
        cocycle=cocycle,
        in_domain=in_domain,
        row_ok=row_ok,
        excluded=int((~in_domain).sum()),
        union_checks=union_checks,
        union_violations=union_violations,
        subset_seed=subset_seed,
    )


@dataclass(eq=False)
class CocycleIdentityReport:
    """Per-cylinder residual |log ratio - cocycle limit| against log(c2/c1).

    The residual is the logarithm of the bounded correction factor the
    sandwich allows; it is reported (with its empirical range) rather than
    asserted to any particular value.
    """

    N: int
    tolerance: float
    words: np.ndarray
    log_ratio: np.ndarray
    cocycle: np.ndarray
    residual: np.ndarray
    in_domain: np.ndarray
    max_residual: float
    min_residual: float
    violations: list[int]

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        return {
            "N": self.N,
            "tolerance": self.tolerance,
            "cylinders": int(self.words.shape[0]),
            "checked": int(self.in_domain.sum()),
            "max_residual": self.max_residual,
            "min_residual": self.min_residual,
            "violations": len(self.violations),
            "pass": self.passed,
        }


def verify_cocycle_identity(
    gm: GibbsMeasureModel,
    sigma: FiniteSupportPermutation,
    N: int,
    slack: float = 1e-9,
) -> CocycleIdentityReport:
    """Check |log(mu(preimage)/mu(C)) - cocycle limit| <= log(c2/c1) + slack.

    When the swept constants coincide (constant normalized ratios, as on
    the full shift) the identity must hold to within ``slack`` alone.
    """
    r = gm.potential.range
    M = sigma.support_radius
    if r > 2 and N < M + r - 2:
        raise WindowTooSmall(
            f"N={N} too small to stabilize the cocycle (need {M + r - 2})"
        )
    words, permuted, mu, mu_p = _setup_window_sweep(gm, sigma, N)
    c1, c2 = gm.gibbs_constants
    tolerance = math.log(c2 / c1) + slack
    in_domain = mu_p > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.where(in_domain, np.log(np.where(in_domain, mu_p, 1.0) / mu), np.nan)
    cocycle = _cocycle_column(gm, sigma, words, permuted, N)
    residual = np.abs(log_ratio - cocycle)
    checked = in_domain & np.isfinite(residual)
    violations = [int(i) for i in np.nonzero(checked & (residual > tolerance))[0]]
    finite = residual[checked]
    return CocycleIdentityReport(
        N=N,
        tolerance=tolerance,
        words=words,
        log_ratio=log_ratio,
        cocycle=cocycle,
        residual=residual,
        in_domain=in_domain,
        max_residual=float(finite.max()) if finite.size else 0.0,
        min_residual=float(finite.min()) if finite.size else 0.0,
        violations=violations,
    )
