"""Finite-support permutations of the integers and their coordinate action.

A permutation tau acts on sequences by reading coordinate tau(n) into slot
n, so composition is contravariant: applying sigma-after-tau to a window
equals applying tau first and then sigma.  The block-swap involution
exchanges the segments [1, k] and [P+1, P+k]; its admissibility domain
(windows that stay admissible after swapping) is what the quasi-invariance
checks quantify over.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BadParameters, BadShape, WindowTooSmall
from .sft import Cylinder, SftModel, left_right_sets


@dataclass(frozen=True, eq=False)
class FiniteSupportPermutation:
    """A bijection of the integers storing only its non-fixed points."""

    moved: Mapping[int, int]

    def __post_init__(self):
        frozen = {int(k): int(v) for k, v in self.moved.items()}
        if any(k == v for k, v in frozen.items()):
            raise BadShape("fixed points must not be stored")
        if set(frozen) != set(frozen.values()) or len(set(frozen.values())) != len(frozen):
            raise BadShape("stored map must be a bijection of its support onto itself")
        object.__setattr__(self, "moved", frozen)

    def __hash__(self):
        return hash(frozenset(self.moved.items()))

    def __eq__(self, other):
        if not isinstance(other, FiniteSupportPermutation):
            return NotImplemented
        return self.moved == other.moved

    def __call__(self, j: int) -> int:
        return self.moved.get(j, j)

    @classmethod
    def identity(cls) -> "FiniteSupportPermutation":
        return cls({})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "FiniteSupportPermutation":
        return cls({src: dst for src, dst in pairs if src != dst})

    @classmethod
    def transposition(cls, i: int, j: int) -> "FiniteSupportPermutation":
        if i == j:
            return cls.identity()
        return cls({i: j, j: i})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.moved)

    @property
    def support_radius(self) -> int:
        """Least M with tau(j) = j whenever |j| >= M (0 for the identity)."""
        if not self.moved:
            return 0
        return 1 + max(abs(j) for j in self.moved)

    @property
    def is_identity(self) -> bool:
        return not self.moved

    @property
    def is_involution(self) -> bool:
        return all(self.moved[v] == k for k, v in self.moved.items())

    def inverse(self) -> "FiniteSupportPermutation":
        return FiniteSupportPermutation({v: k for k, v in self.moved.items()})

    def to_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.moved.items())


def compose(sigma: FiniteSupportPermutation, tau: FiniteSupportPermutation) -> FiniteSupportPermutation:
    """Function composition sigma after tau: j -> sigma(tau(j))."""
    moved = {}
    for j in sigma.support | tau.support:
        img = sigma(tau(j))
        if img != j:
            moved[j] = img
    return FiniteSupportPermutation(moved)


def invert(sigma: FiniteSupportPermutation) -> FiniteSupportPermutation:
    return sigma.inverse()


def make_swap_involution(p: int, k: int) -> FiniteSupportPermutation:
    """The involution translating [1, k] by +p and [p+1, p+k] by -p.

    Requires 1 <= k < p so the two blocks are disjoint; the support
    radius is p + k + 1.
    """
    if k < 1 or k >= p:
        raise BadParameters(f"need 1 <= k < P, got P={p}, k={k}")
    moved = {}
    for j in range(1, k + 1):
        moved[j] = p + j
        moved[p + j] = j
    return FiniteSupportPermutation(moved)


def swap_parameters(sigma: FiniteSupportPermutation):
    """Recover (P, k) if sigma is exactly a block-swap involution, else None."""
    if not sigma.moved:
        return None
    src = sorted(j for j in sigma.moved if j < sigma.moved[j])
    if not src or src[0] != 1:
        return None
    k = len(src)
    if src != list(range(1, k + 1)):
        return None
    p = sigma.moved[1] - 1
    try:
        return (p, k) if make_swap_involution(p, k) == sigma else None
    except BadParameters:
        return None


def permutation_to_json(sigma: FiniteSupportPermutation):
    """Serialize as {"swap": {"P": .., "k": ..}} when possible, else pair list."""
    params = swap_parameters(sigma)
    if params is not None:
        return {"swap": {"P": params[0], "k": params[1]}}
    return [list(pair) for pair in sigma.to_pairs()]


def permutation_from_json(data) -> FiniteSupportPermutation:
    if isinstance(data, dict) and set(data) == {"swap"}:
        return make_swap_involution(int(data["swap"]["P"]), int(data["swap"]["k"]))
    if isinstance(data, list):
        return FiniteSupportPermutation.from_pairs((int(a), int(b)) for a, b in data)
    raise BadShape(f"unrecognized permutation serialization: {data!r}")


@dataclass(frozen=True)
class WindowConfiguration:
    """A finite stretch of a sequence: symbols at [offset, offset + len - 1]."""

    offset: int
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))

    @property
    def start(self) -> int:
        return self.offset

    @property
    def end(self) -> int:
        return self.offset + len(self.symbols) - 1

    def covers(self, lo: int, hi: int) -> bool:
        return len(self.symbols) > 0 and self.offset <= lo and hi <= self.end

    def at(self, position: int) -> int:
        if not (self.offset <= position <= self.end):
            raise WindowTooSmall(f"position {position} outside window [{self.offset}, {self.end}]")
        return self.symbols[position - self.offset]

    def is_admissible(self, model: SftModel) -> bool:
        return model.word_is_admissible(self.symbols)

    def as_cylinder(self) -> Cylinder:
        return Cylinder.fixing_word(self.symbols, start=self.offset)


def apply_permutation(tau: FiniteSupportPermutation, window: WindowConfiguration) -> WindowConfiguration:
    """The permuted window on the same span: slot n receives symbol tau(n).

    Every position the window spans must have its source inside the window,
    otherwise the result would depend on unseen coordinates.
    """
    out = []
    for n in range(window.start, window.end + 1):
        src = tau(n)
        if not (window.start <= src <= window.end):
            raise WindowTooSmall(
                f"permutation reads position {src} outside window [{window.start}, {window.end}]"
            )
        out.append(window.at(src))
    return WindowConfiguration(window.offset, tuple(out))


def _domain_span(sigma: FiniteSupportPermutation) -> tuple[int, int]:
    lo = min(sigma.support) - 1
    hi = max(sigma.support) + 1
    return lo, hi


def in_permutation_domain(model: SftModel, sigma: FiniteSupportPermutation, window: WindowConfiguration) -> bool:
    """Whether the window certifies membership in the admissibility domain of sigma.

    True iff the window itself and its permuted image are both admissible.
    Membership depends only on coordinates adjacent to the support, so the
    window must cover [min support - 1, max support + 1]; it is never
    silently extended.
    """
    if sigma.is_identity:
        return window.is_admissible(model)
    lo, hi = _domain_span(sigma)
    if not window.covers(lo, hi):
        raise WindowTooSmall(
            f"window [{window.start}, {window.end}] must cover [{lo}, {hi}]"
        )
    if not window.is_admissible(model):
        return False
    return apply_permutation(sigma, window).is_admissible(model)


def swap_domain_vs_formula(
    model: SftModel, p: int, k: int, window: WindowConfiguration
) -> tuple[bool, bool]:
    """Two routes to block-swap domain membership on one window.

    ``direct`` permutes the window and tests admissibility.  ``formula``
    reads the fixed pairs at 0,1 and k,k+1 off the window and checks the
    four predecessor/successor constraints at P, P+1, P+k, P+k+1.  The two
    flags agree on every window; tests assert exactly that.
    """
    if k < 2 or p <= k:
        raise BadParameters(f"need 2 <= k < P, got P={p}, k={k}")
    if not window.covers(0, p + k + 1):
        raise WindowTooSmall(f"window must cover [0, {p + k + 1}]")
    sigma = make_swap_involution(p, k)
    direct = in_permutation_domain(model, sigma, window)

    if not window.is_admissible(model):
        return direct, False
    a, b = window.at(0), window.at(1)
    c, d = window.at(k), window.at(k + 1)
    Lb, _ = left_right_sets(model, b)
    _, Ra = left_right_sets(model, a)
    Ld, _ = left_right_sets(model, d)
    _, Rc = left_right_sets(model, c)
    formula = (
        window.at(p) in Lb
        and window.at(p + 1) in Ra
        and window.at(p + k) in Ld
        and window.at(p + k + 1) in Rc
    )
    return direct, formula
