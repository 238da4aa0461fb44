"""Finite-range potentials: locally constant log-weights on admissible words.

A potential of range r is a value table over the admissible r-words; it
depends only on coordinates 0..r-1, so every variation of order k >= r-1
vanishes and all suprema below are finite maxima.  The oscillation
sequence, its geometric envelope, the coboundary test, and the standard
higher-block recoding to range <= 2 all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import BadAlpha, RangeMismatch
from .sft import Cylinder, SftModel, admissible_words, validate_sft


@dataclass(frozen=True, eq=False)
class FiniteRangePotential:
    """Value table over the admissible words of a fixed length (the range)."""

    range: int
    table: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        object.__setattr__(
            self, "table", {tuple(w): float(v) for w, v in self.table.items()}
        )

    def __call__(self, word: Sequence[int]) -> float:
        """Evaluate on the first ``range`` symbols of ``word``."""
        key = tuple(word[: self.range])
        try:
            return self.table[key]
        except KeyError:
            raise RangeMismatch(f"word {key} not in the potential table") from None

    def words(self) -> list[tuple[int, ...]]:
        return sorted(self.table)


def finite_range_potential(model: SftModel, r: int, table: Mapping) -> FiniteRangePotential:
    """Validate that the table covers exactly the admissible r-words.

    Missing admissible words are an error (no silent zero-fill), as are
    entries for inadmissible words.
    """
    if r < 1:
        raise RangeMismatch("range must be >= 1")
    expected = set(admissible_words(model, r))
    got = {tuple(w) for w in table}
    missing = expected - got
    if missing:
        raise RangeMismatch(f"incomplete table: missing {sorted(missing)[:5]}")
    extra = got - expected
    if extra:
        raise RangeMismatch(f"table contains inadmissible words: {sorted(extra)[:5]}")
    return FiniteRangePotential(r, {w: float(table[w]) for w in table})


def zero_potential(model: SftModel, r: int = 1) -> FiniteRangePotential:
    return finite_range_potential(model, r, {w: 0.0 for w in admissible_words(model, r)})


def variation(model: SftModel, phi: FiniteRangePotential, k: int) -> float:
    """Largest |phi(x) - phi(y)| over sequences agreeing on coordinates |j| <= k.

    Only the overlap of [0, r-1] with the agreement window matters: group
    the admissible r-words by their first min(k, r-1)+1 symbols and take the
    widest spread inside a group.  Zero for k >= r-1.
    """
    if k < 0:
        raise RangeMismatch("k must be >= 0")
    r = phi.range
    if k >= r - 1:
        return 0.0
    groups: dict[tuple[int, ...], list[float]] = {}
    for w, v in phi.table.items():
        groups.setdefault(w[: k + 1], []).append(v)
    return max((max(vals) - min(vals) for vals in groups.values()), default=0.0)


@dataclass(frozen=True)
class DecayEnvelope:
    """Geometric bound var_k <= b * alpha^k with its summed tail b/(1-alpha)."""

    b: float
    alpha: float
    tail_bound: float


def decay_envelope(model: SftModel, phi: FiniteRangePotential, alpha: float) -> DecayEnvelope:
    """Smallest b making b * alpha^k dominate every variation of phi."""
    if not (0.0 < alpha < 1.0):
        raise BadAlpha(f"alpha must be in (0, 1), got {alpha}")
    b = 0.0
    for k in range(max(0, phi.range - 1)):
        b = max(b, variation(model, phi, k) / alpha**k)
    return DecayEnvelope(b=b, alpha=alpha, tail_bound=b / (1.0 - alpha))


def is_cohomologous(
    model: SftModel,
    phi: FiniteRangePotential,
    psi: FiniteRangePotential,
    u: FiniteRangePotential,
    tol: float = 1e-12,
) -> bool:
    """Whether psi = phi + u - u o shift holds everywhere.

    All three functions are locally constant, so checking the identity on
    every admissible word long enough to evaluate each term decides it.
    """
    length = max(phi.range, psi.range, u.range + 1)
    for w in admissible_words(model, length):
        lhs = psi(w)
        rhs = phi(w) + u(w) - u(w[1:])
        if abs(lhs - rhs) > tol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class BlockMap:
    """Correspondence between a model and its higher-block recoding.

    New symbols are the admissible (r-1)-words of the source model, in
    lexicographic order; new position q covers source positions
    q .. q+r-2.  For r <= 2 the map is the identity.
    """

    source_range: int
    blocks: tuple[tuple[int, ...], ...]
    index: Mapping[tuple[int, ...], int]

    @property
    def is_identity(self) -> bool:
        return self.source_range <= 2

    @property
    def block_length(self) -> int:
        return 1 if self.is_identity else self.source_range - 1

    def first_symbol(self, block_symbol: int) -> int:
        if self.is_identity:
            return block_symbol
        return self.blocks[block_symbol][0]

    def blocks_with_first_symbol(self, symbols) -> frozenset[int]:
        if self.is_identity:
            return frozenset(symbols)
        wanted = set(symbols)
        return frozenset(i for i, blk in enumerate(self.blocks) if blk[0] in wanted)

    def expand_word(self, block_word: Sequence[int]) -> tuple[int, ...]:
        """Source word covered by consecutive block symbols."""
        if self.is_identity:
            return tuple(block_word)
        if not block_word:
            return ()
        out = list(self.blocks[block_word[0]])
        for b in block_word[1:]:
            blk = self.blocks[b]
            if tuple(out[-(self.block_length - 1):]) != blk[:-1] and self.block_length > 1:
                raise RangeMismatch("non-overlapping consecutive blocks")
            out.append(blk[-1])
        return tuple(out)

    def expand_cylinder(self, cylinder: Cylinder) -> Cylinder:
        """Source-model cylinder for a contiguous single-block-per-position cylinder."""
        if self.is_identity:
            return cylinder
        if cylinder.is_trivial:
            return cylinder
        positions = cylinder.positions()
        if positions != list(range(positions[0], positions[-1] + 1)):
            raise RangeMismatch("expand_cylinder needs contiguous positions")
        word = []
        for p in positions:
            syms = cylinder.constraints[p]
            if len(syms) != 1:
                raise RangeMismatch("expand_cylinder needs single-block constraints")
            word.append(next(iter(syms)))
        return Cylinder.fixing_word(self.expand_word(word), start=positions[0])


def two_block_recode(
    model: SftModel, phi: FiniteRangePotential
) -> tuple[SftModel, FiniteRangePotential, BlockMap]:
    """Recode a range-r potential to range <= 2 on the overlap-block model.

    For r <= 2 everything is returned unchanged.  Otherwise the new
    alphabet is the set of admissible (r-1)-words with transitions allowed
    exactly when the words overlap and the combined r-word is admissible;
    the recoded potential reads the combined word's value.  Admissible
    word counts correspond: m-words of the block model match (m+r-2)-words
    of the source.
    """
    r = phi.range
    if r <= 2:
        bmap = BlockMap(r, tuple((s,) for s in model.symbols()), {})
        return model, phi, bmap
    blocks = sorted(admissible_words(model, r - 1))
    index = {w: i for i, w in enumerate(blocks)}
    m = len(blocks)
    transition = [[0] * m for _ in range(m)]
    table = {}
    for i, u in enumerate(blocks):
        for j, v in enumerate(blocks):
            if u[1:] == v[:-1] and model.is_allowed(u[-1], v[-1]):
                transition[i][j] = 1
                table[(i, j)] = phi(u + (v[-1],))
    names = tuple("".join(model.name_of(s) for s in w) for w in blocks)
    model2 = validate_sft(m, transition, names)
    phi2 = finite_range_potential(model2, 2, table)
    return model2, phi2, BlockMap(r, tuple(blocks), index)
