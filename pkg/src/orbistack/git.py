"""Character-twisted affine GIT for diagonal torus actions.

A k-torus acts diagonally on affine n-space through the columns of an
integer weight matrix, twisted by a character chi.  Every function in a
twisted graded piece is a sum of monomials, so its nonvanishing at a
point depends only on which coordinates of the point vanish: points
enter the theory purely through their supports, and stability becomes a
rank-and-cone condition on (W, chi, S).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NotPolynomial
from .lattice import (
    BOUNDARY,
    OUTSIDE,
    IntMatrix,
    SemigroupBasis,
    Vec,
    cone_position,
    hilbert_basis,
    integer_kernel,
    matrix_rank,
)

STABLE = "Stable"
NOT_STABLE = "NotStable"
STABILIZER_INFINITE = "StabilizerInfinite"
CHI_OUTSIDE_CONE = "ChiOutsideCone"
CHI_ON_BOUNDARY = "ChiOnBoundary"


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class CharacterAction:
    """Diagonal action data: weight matrix plus twisting character."""

    matrix: IntMatrix
    character: Vec

    def __post_init__(self):
        object.__setattr__(self, "character", tuple(self.character))
        if len(self.character) != self.matrix.k:
            raise ValueError("character length must equal the number of weight rows")
        for c in self.character:
            if not isinstance(c, int):
                raise ValueError("character entries must be integers")


@dataclass(frozen=True)
class StabilityCertificate:
    """Verdict for one support, with a destabilizing witness when unstable.

    The witness is a one-parameter subgroup lam with lam.w_i >= 0 for
    every i in the support and lam.chi <= 0; the equality pattern
    matches the reason (zero on the weights for StabilizerInfinite,
    strictly negative on chi for ChiOutsideCone, zero on chi but not on
    the whole cone for ChiOnBoundary).
    """

    verdict: str
    reason: str | None = None
    witness: Vec | None = None

    @property
    def stable(self) -> bool:
        return self.verdict == STABLE


@dataclass(frozen=True)
class StableLocus:
    """Upward-closed family of stable supports, stored by its minimal elements."""

    minimal_stable_supports: tuple[tuple[int, ...], ...]

    def contains(self, support: Iterable[int]) -> bool:
        s = set(support)
        return any(set(m) <= s for m in self.minimal_stable_supports)


def is_polynomial(W: IntMatrix) -> bool:
    """Does the action extend to the multiplicative monoid (all weights >= 0)?"""
    return all(x >= 0 for row in W.entries for x in row)


def representation_degree(W: IntMatrix) -> int:
    """Largest total weight of a coordinate, for a polynomial action.

    Coordinate j transforms by the monomial whose exponents are column j,
    of total degree equal to the column sum.
    """
    for i, row in enumerate(W.entries):
        for j, x in enumerate(row):
            if x < 0:
                raise NotPolynomial(
                    "a negative weight entry leaves the polynomial regime",
                    entry=[i, j],
                    value=x,
                )
    return max((sum(W.column(j)) for j in range(W.cols)), default=0)


def _normalize_support(support: Iterable[int], n: int) -> tuple[int, ...]:
    s = sorted(set(support))
    for i in s:
        if not isinstance(i, int) or not 1 <= i <= n:
            raise ValueError(f"support entries must lie in 1..{n}, got {i!r}")
    return tuple(s)


def is_stable_support(act: CharacterAction, support: Iterable[int]) -> StabilityCertificate:
    """Stability of points whose nonvanishing coordinates are exactly the support.

    Stable means the weights on the support span the full rational
    character space (finite stabilizer) and the twist lies in the
    relative interior of the cone they generate (a twisted covariant is
    nonvanishing there and the lifted orbit is closed).  Supports are
    1-based.
    """
    s = _normalize_support(support, act.matrix.cols)
    k = act.matrix.k
    cols = tuple(act.matrix.column(i - 1) for i in s)
    if matrix_rank(cols) < k:
        # Any functional vanishing on the support weights destabilizes;
        # orient it against chi.
        lam = integer_kernel(cols, k)[0]
        if _dot(lam, act.character) > 0:
            lam = tuple(-x for x in lam)
        return StabilityCertificate(NOT_STABLE, STABILIZER_INFINITE, lam)
    pos = cone_position(act.character, cols)
    if pos.position == OUTSIDE:
        return StabilityCertificate(NOT_STABLE, CHI_OUTSIDE_CONE, pos.witness)
    if pos.position == BOUNDARY:
        return StabilityCertificate(NOT_STABLE, CHI_ON_BOUNDARY, pos.witness)
    return StabilityCertificate(STABLE)


def stable_locus(act: CharacterAction) -> StableLocus:
    """Minimal stable supports; the stable family is their upward closure."""
    n = act.matrix.cols
    minimal: list[tuple[int, ...]] = []
    verdicts: dict[tuple[int, ...], bool] = {}
    for size in range(n + 1):
        for s in combinations(range(1, n + 1), size):
            ok = is_stable_support(act, s).stable
            verdicts[s] = ok
            if ok and not any(set(m) <= set(s) for m in minimal):
                minimal.append(s)
    locus = StableLocus(tuple(minimal))
    for s, ok in verdicts.items():
        if ok != locus.contains(s):
            raise RuntimeError(f"stable supports are not upward closed at {s}")
    return locus


@dataclass(frozen=True)
class ChartReport:
    """One Proj chart: a semigroup generator and whether its chart is stable.

    The chart is stable when every support containing the generator's
    support is stable; by upward closure that is the generator support's
    own verdict.
    """

    monomial: Vec
    degree: int
    support: tuple[int, ...]
    stable: bool


@dataclass(frozen=True)
class ProjPresentation:
    basis: SemigroupBasis
    charts: tuple[ChartReport, ...]
    locus: StableLocus


def proj_presentation(act: CharacterAction, *, certify_degree: int | None = None) -> ProjPresentation:
    """Generators of the twisted section ring with per-chart stability.

    Degree-zero invariant generators, when present, are reported on the
    basis object and flip its pointed flag; they do not get charts.
    """
    basis = hilbert_basis(act.matrix, act.character, certify_degree=certify_degree)
    locus = stable_locus(act)
    charts = []
    for e, m in basis.generators:
        supp = tuple(j + 1 for j, x in enumerate(e) if x)
        charts.append(ChartReport(e, m, supp, locus.contains(supp)))
    return ProjPresentation(basis, tuple(charts), locus)


def stability_power_invariance(act: CharacterAction, power: int) -> bool:
    """Compare the stable loci for chi and for power * chi."""
    if not isinstance(power, int) or power < 1:
        raise ValueError("power must be a positive integer")
    scaled = CharacterAction(act.matrix, tuple(power * c for c in act.character))
    return stable_locus(act) == stable_locus(scaled)
