"""Subshifts of finite type over a finite alphabet.

A model is a 0/1 transition matrix with no zero row or column, so every
symbol sits on some bi-infinite admissible sequence.  Cylinders are finite
maps position -> allowed symbol set; an empty map denotes the whole space.
This module also computes the two combinatorial thresholds used by the
block-swap construction: the distance beyond which any two allowed symbol
pairs co-occur, and the separation beyond which the swap constraint system
is always satisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    BadShape,
    KTooSmall,
    NotMixing,
    SymbolOutOfRange,
    ZeroColumn,
    ZeroRow,
)


@dataclass(frozen=True, eq=False)
class SftModel:
    """Alphabet {0..n-1} plus an n x n 0/1 transition matrix.

    Symbols are integer indices; ``symbol_names`` records the external
    names used by model files (declaration order = index).
    """

    alphabet_size: int
    transition: np.ndarray
    symbol_names: tuple[str, ...]

    def __post_init__(self):
        self.transition.flags.writeable = False

    def symbols(self) -> range:
        return range(self.alphabet_size)

    def is_allowed(self, a: int, b: int) -> bool:
        return bool(self.transition[a, b])

    def check_symbol(self, a: int) -> None:
        if not (0 <= a < self.alphabet_size):
            raise SymbolOutOfRange(f"symbol {a} not in 0..{self.alphabet_size - 1}")

    def word_is_admissible(self, word: Sequence[int]) -> bool:
        for s in word:
            if not (0 <= s < self.alphabet_size):
                return False
        T = self.transition
        return all(T[word[i], word[i + 1]] for i in range(len(word) - 1))

    def name_of(self, symbol: int) -> str:
        return self.symbol_names[symbol]

    def index_of(self, name: str) -> int:
        try:
            return self.symbol_names.index(name)
        except ValueError:
            raise SymbolOutOfRange(f"unknown symbol name {name!r}") from None


def validate_sft(alphabet_size: int, transition, symbol_names=None) -> SftModel:
    """Build a model, rejecting matrices that strand a symbol.

    Every row and every column must contain a 1, otherwise some symbol has
    no successor (or predecessor) and cannot appear in a bi-infinite
    sequence.
    """
    n = int(alphabet_size)
    if n < 1:
        raise BadShape("alphabet must have at least one symbol")
    T = np.asarray(transition)
    if T.shape != (n, n):
        raise BadShape(f"transition must be {n}x{n}, got {T.shape}")
    if not np.isin(T, (0, 1)).all():
        raise BadShape("transition entries must be 0 or 1")
    T = T.astype(np.int8)
    for i in range(n):
        if not T[i, :].any():
            raise ZeroRow(i)
    for j in range(n):
        if not T[:, j].any():
            raise ZeroColumn(j)
    if symbol_names is None:
        symbol_names = tuple(str(i) for i in range(n))
    else:
        symbol_names = tuple(symbol_names)
        if len(symbol_names) != n or len(set(symbol_names)) != n:
            raise BadShape("symbol names must be distinct and match the alphabet size")
    return SftModel(n, T, symbol_names)


@dataclass(frozen=True)
class Cylinder:
    """Finitely many coordinate constraints: position -> nonempty symbol set.

    An empty constraint map denotes the whole space, so the measure of the
    trivial cylinder is 1 without a special case.
    """

    constraints: Mapping[int, frozenset[int]]

    def __post_init__(self):
        frozen = {}
        for pos, syms in self.constraints.items():
            fs = frozenset(syms)
            if not fs:
                raise BadShape(f"empty symbol set at position {pos}")
            frozen[int(pos)] = fs
        object.__setattr__(self, "constraints", frozen)

    @classmethod
    def whole_space(cls) -> "Cylinder":
        return cls({})

    @classmethod
    def fixing_word(cls, word: Sequence[int], start: int = 0) -> "Cylinder":
        return cls({start + i: frozenset({s}) for i, s in enumerate(word)})

    @property
    def is_trivial(self) -> bool:
        return not self.constraints

    def positions(self) -> list[int]:
        return sorted(self.constraints)

    def span(self) -> Optional[tuple[int, int]]:
        if not self.constraints:
            return None
        ps = self.constraints.keys()
        return (min(ps), max(ps))

    def shifted(self, offset: int) -> "Cylinder":
        """Translate every constraint by ``offset`` (the preimage under the
        ``offset``-fold shift)."""
        return Cylinder({p + offset: s for p, s in self.constraints.items()})


def merge_cylinders(*cylinders: Cylinder) -> Optional[Cylinder]:
    """Intersect constraint maps; ``None`` when some position's sets clash."""
    merged: dict[int, frozenset[int]] = {}
    for cyl in cylinders:
        for pos, syms in cyl.constraints.items():
            cur = merged.get(pos)
            syms = syms if cur is None else cur & syms
            if not syms:
                return None
            merged[pos] = syms
    return Cylinder(merged)


@dataclass(frozen=True)
class MixingReport:
    """Primitivity verdict; ``exponent`` is the least M with T^M > 0."""

    is_mixing: bool
    exponent: Optional[int]


def check_mixing(model: SftModel) -> MixingReport:
    """Decide topological mixing (= primitivity of the transition matrix).

    Powers are tried up to the Wielandt bound n^2 - 2n + 2; a primitive
    matrix must turn positive by then.  Products are taken in saturating
    boolean form so no overflow is possible.
    """
    n = model.alphabet_size
    B = model.transition.astype(np.int64)
    cur = B
    bound = n * n - 2 * n + 2
    for m in range(1, bound + 1):
        if (cur > 0).all():
            return MixingReport(True, m)
        cur = ((cur @ B) > 0).astype(np.int64)
    return MixingReport(False, None)


def left_right_sets(model: SftModel, a: int) -> tuple[frozenset[int], frozenset[int]]:
    """Predecessors and successors of a symbol: (L(a), R(a)).

    j is in L(a) iff the word j,a is allowed; j is in R(a) iff a,j is.
    """
    model.check_symbol(a)
    T = model.transition
    left = frozenset(int(j) for j in np.nonzero(T[:, a])[0])
    right = frozenset(int(j) for j in np.nonzero(T[a, :])[0])
    return left, right


def allowed_pairs(model: SftModel) -> frozenset[tuple[int, int]]:
    """All (a, b) with an allowed transition a -> b."""
    rows, cols = np.nonzero(model.transition)
    return frozenset(zip(map(int, rows), map(int, cols)))


def _constraint_masks(model: SftModel, cylinder: Cylinder):
    """Per-position boolean masks over the alphabet, clipped to the alphabet.

    Out-of-range symbols in a constraint simply cannot occur, so they are
    dropped rather than rejected; a mask that ends up empty is unsatisfiable.
    """
    n = model.alphabet_size
    masks = {}
    for pos, syms in cylinder.constraints.items():
        mask = np.zeros(n, dtype=bool)
        for s in syms:
            if 0 <= s < n:
                mask[s] = True
        masks[pos] = mask
    return masks


def constrained_word_exists(model: SftModel, cylinder: Cylinder) -> bool:
    """True iff some admissible bi-infinite sequence meets every constraint.

    Forward set-propagation across the constraint span decides this exactly:
    positions outside the span never bind because no row or column of the
    transition matrix is zero.
    """
    if cylinder.is_trivial:
        return True
    masks = _constraint_masks(model, cylinder)
    lo, hi = cylinder.span()
    T = model.transition.astype(bool)
    reach = masks[lo]
    if not reach.any():
        return False
    for pos in range(lo + 1, hi + 1):
        reach = (reach @ T) > 0
        if pos in masks:
            reach = reach & masks[pos]
        if not reach.any():
            return False
    return True


def witness_word(
    model: SftModel, cylinder: Cylinder, lo: Optional[int] = None, hi: Optional[int] = None
) -> Optional[list[int]]:
    """An admissible word over [lo, hi] meeting the constraints, or None.

    Defaults to the constraint span.  Forward propagation followed by a
    backward sweep picks the smallest symbol at each step, so the witness
    is deterministic.
    """
    span = cylinder.span()
    if span is None:
        if lo is None or hi is None:
            return []
    else:
        lo = span[0] if lo is None else min(lo, span[0])
        hi = span[1] if hi is None else max(hi, span[1])
    masks = _constraint_masks(model, cylinder)
    n = model.alphabet_size
    T = model.transition.astype(bool)
    full = np.ones(n, dtype=bool)
    layers = []
    reach = masks.get(lo, full).copy()
    layers.append(reach)
    if not reach.any():
        return None
    for pos in range(lo + 1, hi + 1):
        reach = (reach @ T) > 0
        reach = reach & masks.get(pos, full)
        layers.append(reach)
        if not reach.any():
            return None
    word = [int(np.nonzero(layers[-1])[0][0])]
    for layer in reversed(layers[:-1]):
        prevs = layer & T[:, word[-1]]
        word.append(int(np.nonzero(prevs)[0][0]))
    word.reverse()
    return word


def admissible_words(model: SftModel, length: int) -> Iterator[tuple[int, ...]]:
    """All admissible words of the given length, lexicographically."""
    if length == 0:
        yield ()
        return
    T = model.transition
    n = model.alphabet_size
    stack: list[tuple[int, ...]] = [(s,) for s in reversed(range(n))]
    while stack:
        word = stack.pop()
        if len(word) == length:
            yield word
            continue
        last = word[-1]
        for s in reversed(range(n)):
            if T[last, s]:
                stack.append(word + (s,))


def word_array(model: SftModel, length: int) -> np.ndarray:
    """Admissible words as an (m, length) int array, lexicographic rows."""
    n = model.alphabet_size
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    arr = np.arange(n, dtype=np.int64).reshape(n, 1)
    T = model.transition
    for _ in range(length - 1):
        ext = np.repeat(arr, n, axis=0)
        tail = np.tile(np.arange(n, dtype=np.int64), arr.shape[0]).reshape(-1, 1)
        ok = T[ext[:, -1], tail[:, 0]] > 0
        arr = np.hstack([ext, tail])[ok]
    return arr


def double_pair_cylinder(model: SftModel, k: int, a: int, b: int, c: int, d: int) -> Optional[Cylinder]:
    """Cylinder fixing the pair (a, b) at 0,1 and (c, d) at k, k+1.

    For k = 1 the two blocks overlap; clashing symbols make the cylinder
    provably empty and ``None`` is returned.
    """
    for s in (a, b, c, d):
        model.check_symbol(s)
    first = Cylinder({0: {a}, 1: {b}})
    second = Cylinder({k: {c}, k + 1: {d}})
    return merge_cylinders(first, second)


def boundary_pair_cylinder(model: SftModel, k: int, a: int, b: int, c: int, d: int) -> Optional[Cylinder]:
    """Relaxation of :func:`double_pair_cylinder` to predecessor/successor sets.

    Positions 0,1,k,k+1 are constrained to L(b), R(a), L(d), R(c); every
    point of the fixed-pair cylinder satisfies these by construction.
    """
    Lb, _ = left_right_sets(model, b)
    _, Ra = left_right_sets(model, a)
    Ld, _ = left_right_sets(model, d)
    _, Rc = left_right_sets(model, c)
    return merge_cylinders(Cylinder({0: Lb, 1: Ra}), Cylinder({k: Ld, k + 1: Rc}))


def pair_threshold(model: SftModel) -> int:
    """Least k0 such that every two allowed pairs co-occur at all distances >= k0.

    The fixed-pair cylinder at distance k is nonempty iff b reaches c in
    k-1 steps, so k0 is one more than the least exponent making the
    transition matrix entrywise positive.
    """
    report = check_mixing(model)
    if not report.is_mixing:
        raise NotMixing("pair threshold requires a mixing model")
    return report.exponent + 1


def separation_threshold(model: SftModel, k: int) -> int:
    """Least P0 > k such that, for all P >= P0 and all allowed pairs
    (a,b), (c,d), the fixed pairs at 0,1,k,k+1 can coexist with the
    boundary-set constraints shifted to P.

    The scan is capped at 2(n^2 - 2n + 2) + 2k + 4: past two primitivity
    gaps plus the block widths the system is always satisfiable.
    """
    report = check_mixing(model)
    if not report.is_mixing:
        raise NotMixing("separation threshold requires a mixing model")
    k0 = report.exponent + 1
    if k < k0:
        raise KTooSmall(f"k={k} below pair threshold {k0}")
    n = model.alphabet_size
    cap = 2 * (n * n - 2 * n + 2) + 2 * k + 4
    pairs = sorted(allowed_pairs(model))

    def satisfiable(P: int) -> bool:
        for (a, b) in pairs:
            for (c, d) in pairs:
                fixed = double_pair_cylinder(model, k, a, b, c, d)
                loose = boundary_pair_cylinder(model, k, a, b, c, d)
                if fixed is None or loose is None:
                    return False
                merged = merge_cylinders(fixed, loose.shifted(P))
                if merged is None or not constrained_word_exists(model, merged):
                    return False
        return True

    last_bad = None
    for P in range(k + 1, cap + 1):
        if not satisfiable(P):
            last_bad = P
    return k + 1 if last_bad is None else max(k + 1, last_bad + 1)
