"""Gibbs measures for finite-range potentials via the transfer matrix.

The weight matrix W[i][j] = T[i][j] * exp(phi(i, j)) has a simple positive
dominant eigenpair on a mixing model; its left/right eigenvectors give the
pressure p = log(eigenvalue), a stochastic matrix and its stationary
vector, and hence exact cylinder measures.  Potentials of range > 2 are
recoded to overlap blocks first, which leaves all cylinder measures
unchanged.  The normalized cylinder-to-Boltzmann ratios

    a_m(x) = mu(x_0..x_m fixed) / exp(-p*m + sum_{j<m} phi(x_j..))

are swept over all admissible words up to a configurable length; their min
and max are the empirical sandwich constants (c1, c2).  p = log(dominant
eigenvalue) is the convention used throughout and stated in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import NoConvergence, NotMixing, SftgibbsError
from .permutations import WindowConfiguration
from .potentials import BlockMap, FiniteRangePotential, two_block_recode
from .sft import Cylinder, SftModel, check_mixing, word_array

POWER_TOL = 1e-14
POWER_CAP = 10**6


def power_iteration(matrix: np.ndarray, tol: float = POWER_TOL, cap: int = POWER_CAP):
    """Dominant eigenpair of a primitive nonnegative matrix.

    Plain power iteration; primitivity guarantees a spectral gap so the
    iteration converges linearly.  The vector is normalized to unit sum.
    """
    n = matrix.shape[0]
    v = np.full(n, 1.0 / n)
    lam = 0.0
    for it in range(cap):
        w = matrix @ v
        total = w.sum()
        if total <= 0:
            raise NoConvergence(it)
        w /= total
        new_lam = total
        if np.abs(w - v).max() <= tol and abs(new_lam - lam) <= tol * max(1.0, abs(new_lam)):
            return new_lam, w
        v = w
        lam = new_lam
    raise NoConvergence(cap)


@dataclass(frozen=True, eq=False)
class GibbsMeasureModel:
    """Everything needed to evaluate the measure exactly.

    ``base`` is the model the Markov representation lives on (the overlap
    recode when the potential has range > 2, the source model otherwise).
    ``gibbs_constants`` are the swept (c1, c2) with the extremal words that
    realized them.
    """

    source_model: SftModel
    potential: FiniteRangePotential
    base: SftModel
    working_potential: FiniteRangePotential
    recode: BlockMap
    pressure: float
    eigenvalue: float
    right_vec: np.ndarray
    left_vec: np.ndarray
    stochastic: np.ndarray
    stationary: np.ndarray
    gibbs_constants: tuple[float, float]
    constants_m_max: int
    lowest_word: tuple[int, ...]
    highest_word: tuple[int, ...]

    def __post_init__(self):
        for arr in (self.right_vec, self.left_vec, self.stochastic, self.stationary):
            arr.flags.writeable = False

    @property
    def is_recoded(self) -> bool:
        return not self.recode.is_identity

    def working_masks(self, cylinder: Cylinder) -> dict[int, np.ndarray]:
        """Constraint masks over the base alphabet.

        A source constraint ``x_p in A`` says exactly that the block at
        position p starts with a symbol of A, so translation is
        per-position.
        """
        n = self.base.alphabet_size
        masks = {}
        for pos, syms in cylinder.constraints.items():
            mask = np.zeros(n, dtype=bool)
            for b in self.recode.blocks_with_first_symbol(syms):
                if 0 <= b < n:
                    mask[b] = True
            masks[pos] = mask
        return masks


@dataclass(frozen=True)
class CylinderMeasureResult:
    """Measure of a cylinder; zero exactly when the cylinder is inadmissible."""

    value: float
    exact: bool = True


def _transfer_matrix(model: SftModel, phi: FiniteRangePotential) -> np.ndarray:
    n = model.alphabet_size
    T = model.transition.astype(float)
    W = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if T[i, j]:
                word = (i, j) if phi.range == 2 else (i,)
                W[i, j] = np.exp(phi(word))
    return W


def build_gibbs_measure(model: SftModel, phi: FiniteRangePotential, m_max: int = 10) -> GibbsMeasureModel:
    """Construct the measure and sweep its sandwich constants.

    Raises ``NotMixing`` for imprimitive models and ``NoConvergence`` if
    the power iteration exceeds its cap.
    """
    if not check_mixing(model).is_mixing:
        raise NotMixing("Gibbs construction requires a mixing model")
    base, working, recode = two_block_recode(model, phi)
    W = _transfer_matrix(base, working)
    lam, right = power_iteration(W)
    _, left = power_iteration(W.T)
    # bilinear refinement: quadratically accurate in the vector error
    lam = float(left @ W @ right / (left @ right))
    pressure = float(np.log(lam))
    P = W * right[None, :] / (lam * right[:, None])
    rows = P.sum(axis=1)
    if np.abs(rows - 1.0).max() > 1e-12:
        raise NoConvergence(POWER_CAP)
    P = P / rows[:, None]
    pi = left * right
    pi = pi / pi.sum()
    if np.abs(pi @ P - pi).max() > 1e-12:
        raise NoConvergence(POWER_CAP)

    gm = GibbsMeasureModel(
        source_model=model,
        potential=phi,
        base=base,
        working_potential=working,
        recode=recode,
        pressure=pressure,
        eigenvalue=lam,
        right_vec=right,
        left_vec=left,
        stochastic=P,
        stationary=pi,
        gibbs_constants=(0.0, 0.0),
        constants_m_max=m_max,
        lowest_word=(),
        highest_word=(),
    )
    c1, c2, wlow, whigh = _sweep_constants(gm, m_max)
    object.__setattr__(gm, "gibbs_constants", (c1, c2))
    object.__setattr__(gm, "lowest_word", wlow)
    object.__setattr__(gm, "highest_word", whigh)
    return gm


def cylinder_measure(gm: GibbsMeasureModel, cylinder: Cylinder) -> CylinderMeasureResult:
    """Exact measure from the Markov representation.

    Gaps between constrained positions contribute powers of the stochastic
    matrix, so arbitrary spacing costs only log(gap) matrix products; the
    value is invariant under translating all constraints.
    """
    if cylinder.is_trivial:
        return CylinderMeasureResult(1.0)
    masks = gm.working_masks(cylinder)
    positions = sorted(masks)
    P = gm.stochastic
    v = np.where(masks[positions[0]], gm.stationary, 0.0)
    prev = positions[0]
    for pos in positions[1:]:
        gap = pos - prev
        v = v @ np.linalg.matrix_power(P, gap)
        v = np.where(masks[pos], v, 0.0)
        prev = pos
    return CylinderMeasureResult(float(v.sum()))


def word_cylinder_measures(gm: GibbsMeasureModel, words: np.ndarray) -> np.ndarray:
    """Measures of many word cylinders at once (rows of ``words``).

    Fast gather/product path on unrecoded models; recoded models fall back
    to per-row evaluation.
    """
    if words.ndim != 2:
        raise SftgibbsError("words must be a 2-d array")
    if words.shape[1] == 0:
        return np.ones(words.shape[0])
    if not gm.is_recoded:
        mu = gm.stationary[words[:, 0]]
        if words.shape[1] > 1:
            steps = gm.stochastic[words[:, :-1], words[:, 1:]]
            mu = mu * steps.prod(axis=1)
        return mu
    return np.array(
        [cylinder_measure(gm, Cylinder.fixing_word(tuple(row))).value for row in words]
    )


def _phi_word_sums(gm: GibbsMeasureModel, words: np.ndarray, m: int) -> np.ndarray:
    """sum_{j=0}^{m-1} phi(x_j .. x_{j+r-1}) for every row."""
    phi = gm.potential
    r = phi.range
    count = words.shape[0]
    if m == 0:
        return np.zeros(count)
    if r == 1:
        lut = np.zeros(gm.source_model.alphabet_size)
        for w, val in phi.table.items():
            lut[w[0]] = val
        return lut[words[:, :m]].sum(axis=1)
    if r == 2:
        n = gm.source_model.alphabet_size
        lut = np.zeros((n, n))
        for w, val in phi.table.items():
            lut[w[0], w[1]] = val
        return lut[words[:, :m], words[:, 1 : m + 1]].sum(axis=1)
    out = np.empty(count)
    for i, row in enumerate(words):
        out[i] = sum(phi(tuple(row[j : j + r])) for j in range(m))
    return out


def _sweep_constants(gm: GibbsMeasureModel, m_max: int):
    """Min/max of a_m over all admissible words with m = 0..m_max."""
    model = gm.source_model
    r = gm.potential.range
    best_low = None
    best_high = None
    for m in range(m_max + 1):
        length = max(m + 1, m + r - 1)
        words = word_array(model, length)
        mu = word_cylinder_measures(gm, words[:, : m + 1])
        # eigenvalue powers, not exp(p*m): keeps the ratio exact when the
        # eigenvalue and the cylinder measures are exact dyadics
        boltz = gm.eigenvalue ** (-m) * np.exp(_phi_word_sums(gm, words, m))
        ratios = mu / boltz
        i_lo = int(np.argmin(ratios))
        i_hi = int(np.argmax(ratios))
        if best_low is None or ratios[i_lo] < best_low[0]:
            best_low = (float(ratios[i_lo]), tuple(int(s) for s in words[i_lo]))
        if best_high is None or ratios[i_hi] > best_high[0]:
            best_high = (float(ratios[i_hi]), tuple(int(s) for s in words[i_hi]))
    c1, wlow = best_low
    c2, whigh = best_high
    if c1 <= 0:
        raise SftgibbsError("gibbs sweep produced a nonpositive cylinder/Boltzmann ratio")
    return c1, c2, wlow, whigh


@dataclass(frozen=True)
class GibbsBoundsReport:
    """Swept sandwich constants and the words that realized them."""

    c1_hat: float
    c2_hat: float
    lowest_word: tuple[int, ...]
    highest_word: tuple[int, ...]
    m_max: int


def verify_gibbs_bounds(gm: GibbsMeasureModel, m_max: int) -> GibbsBoundsReport:
    """Re-sweep a_m up to ``m_max`` and report the empirical constants."""
    if m_max < 1:
        raise SftgibbsError("m_max must be >= 1")
    c1, c2, wlow, whigh = _sweep_constants(gm, m_max)
    return GibbsBoundsReport(c1, c2, wlow, whigh, m_max)


@dataclass(frozen=True)
class RandomWordCheck:
    """Outcome of re-testing swept constants on random longer words."""

    count: int
    max_len: int
    seed: int
    violations: int
    worst_low: float
    worst_high: float


def recheck_gibbs_bounds(
    gm: GibbsMeasureModel,
    count: int = 1000,
    max_len: int = 20,
    seed: int = 0,
    rtol: float = 1e-12,
) -> RandomWordCheck:
    """Sample admissible words from a trajectory and re-test c1 <= a_m <= c2.

    The bounds are applied with no slack beyond the relative tolerance
    needed to absorb float rounding across different product lengths.
    """
    c1, c2 = gm.gibbs_constants
    r = gm.potential.range
    need = max_len + r + 1
    traj = sample_trajectory(gm, count + need, seed).symbols
    rng = np.random.default_rng(seed)
    violations = 0
    worst_low = np.inf
    worst_high = -np.inf
    arr = np.asarray(traj)
    for _ in range(count):
        m = int(rng.integers(1, max_len))
        start = int(rng.integers(0, len(traj) - need))
        length = max(m + 1, m + r - 1)
        word = arr[start : start + length].reshape(1, -1)
        mu = word_cylinder_measures(gm, word[:, : m + 1])[0]
        a = mu * gm.eigenvalue**m / np.exp(_phi_word_sums(gm, word, m)[0])
        worst_low = min(worst_low, a)
        worst_high = max(worst_high, a)
        if a < c1 * (1 - rtol) or a > c2 * (1 + rtol):
            violations += 1
    return RandomWordCheck(count, max_len, seed, violations, float(worst_low), float(worst_high))


def sample_trajectory(gm: GibbsMeasureModel, length: int, seed: int) -> WindowConfiguration:
    """Seeded stationary sample of the chain, reported in source symbols.

    Identical (seed, length) gives identical output.
    """
    if length < 1:
        raise SftgibbsError("length must be >= 1")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(gm.stochastic, axis=1)
    n = gm.base.alphabet_size
    state = int(np.searchsorted(np.cumsum(gm.stationary), rng.random(), side="right"))
    state = min(state, n - 1)
    states = np.empty(length, dtype=np.int64)
    states[0] = state
    draws = rng.random(length - 1)
    for t in range(1, length):
        state = int(np.searchsorted(cum[state], draws[t - 1], side="right"))
        state = min(state, n - 1)
        states[t] = state
    if gm.is_recoded:
        symbols = tuple(gm.recode.first_symbol(int(s)) for s in states)
    else:
        symbols = tuple(int(s) for s in states)
    return WindowConfiguration(0, symbols)


def entropy(gm: GibbsMeasureModel) -> float:
    """Shannon entropy rate -sum_i pi_i sum_j P_ij log P_ij."""
    P = gm.stochastic
    pi = gm.stationary
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(P), 0.0)
    return float(-(pi @ terms.sum(axis=1)))


def mean_potential(gm: GibbsMeasureModel) -> float:
    """Integral of the potential against the measure."""
    phi = gm.working_potential
    pi = gm.stationary
    if phi.range == 1:
        return float(sum(pi[w[0]] * v for w, v in phi.table.items()))
    P = gm.stochastic
    return float(sum(pi[w[0]] * P[w[0], w[1]] * v for w, v in phi.table.items()))
