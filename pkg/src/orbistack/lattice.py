"""Exact integer linear algebra for graded lattice-point semigroups.

The central objects are the solution sets of ``W e = m chi`` with ``e`` a
nonnegative integer vector: single graded pieces, the semigroup of all
pairs ``(e, m)``, and the rational cone geometry (spans, dual cones,
relative interiors) that decides finiteness and stability questions.

All arithmetic is exact.  Python integers are unbounded, so there is no
overflow to guard against; Fraction appears only where rational input
does (cone classification).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import InfiniteSolutionSet

Vec = tuple[int, ...]

OUTSIDE = "outside"
BOUNDARY = "boundary"
RELATIVE_INTERIOR = "relative_interior"


def grlex_key(e: Sequence[int]):
    """Sort key for the canonical monomial order.

    Lists are emitted with the graded-lex largest monomial first: higher
    total degree wins, ties break toward larger leading exponents.
    """
    return (-sum(e), tuple(-c for c in e))


def sort_monomials(vectors: Iterable[Sequence[int]]) -> tuple[Vec, ...]:
    return tuple(sorted((tuple(v) for v in vectors), key=grlex_key))


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _neg(v: Sequence[int]) -> Vec:
    return tuple(-x for x in v)


def _as_vec(v: Sequence[int], length: int | None = None, what: str = "vector") -> Vec:
    out = tuple(v)
    for x in out:
        if not isinstance(x, int):
            raise ValueError(f"{what} entries must be integers, got {x!r}")
    if length is not None and len(out) != length:
        raise ValueError(f"{what} must have length {length}, got {len(out)}")
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix of character weights; column j is the weight of x_j."""

    entries: tuple[Vec, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 1:
            raise ValueError("need at least one column")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
            for x in row:
                if not isinstance(x, int):
                    raise ValueError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(entries[0])
        return cls(entries, cols)

    @property
    def k(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> Vec:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> tuple[Vec, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def apply(self, e: Sequence[int]) -> Vec:
        if len(e) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(_dot(row, e) for row in self.entries)


@dataclass(frozen=True)
class GradedSolutionSet:
    """All nonnegative integer solutions of one graded piece."""

    degree: int
    basis: tuple[Vec, ...]

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self) -> Iterator[Vec]:
        return iter(self.basis)

    def __contains__(self, e) -> bool:
        return tuple(e) in self.basis


@dataclass(frozen=True)
class SemigroupBasis:
    """Minimal generators of the graded solution semigroup.

    ``generators`` hold the degree m >= 1 part as (exponents, m) pairs.
    ``invariant_generators`` are the minimal nonzero solutions in degree
    zero; when present the semigroup is not pointed and ``pointed`` is
    False.  ``certified_degree`` records how far completeness was checked
    against direct enumeration (None when the sweep was skipped).
    """

    generators: tuple[tuple[Vec, int], ...]
    invariant_generators: tuple[Vec, ...]
    pointed: bool
    certified_degree: int | None

    def max_degree(self) -> int:
        return max((m for _, m in self.generators), default=0)


def _row_axpy(target: list[int], source: list[int], q: int) -> None:
    for i, s in enumerate(source):
        target[i] -= q * s


def _row_hnf(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """Row Hermite normal form by integer row operations; returns (H, rank)."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nr):
            while m[i][c]:
                q = m[r][c] // m[i][c]
                _row_axpy(m[r], m[i], q)
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                _row_axpy(m[i], m[r], q)
        r += 1
    return m, r


@lru_cache(maxsize=65536)
def _rank_cached(rows: tuple[Vec, ...]) -> int:
    live = [r for r in rows if any(r)]
    if not live:
        return 0
    _, r = _row_hnf(live)
    return r


def matrix_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank over the rationals of the matrix with the given rows."""
    return _rank_cached(tuple(tuple(r) for r in rows))


def integer_kernel(rows: Iterable[Sequence[int]], n: int) -> tuple[Vec, ...]:
    """Basis of the saturated lattice {v in Z^n : row . v = 0 for all rows}."""
    rows = [tuple(r) for r in rows]
    k = len(rows)
    for r in rows:
        if len(r) != n:
            raise ValueError("row length does not match n")
    aug = []
    for j in range(n):
        aug.append([rows[i][j] for i in range(k)] + [1 if t == j else 0 for t in range(n)])
    h, _ = _row_hnf(aug)
    return tuple(tuple(row[k:]) for row in h if not any(row[:k]))


def primitive(v: Sequence[int]) -> Vec:
    """Divide out the gcd of the entries; the zero vector is returned as is."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def lattice_spans(columns: Iterable[Sequence[int]], k: int) -> bool:
    """Do the given vectors span Q^k?"""
    cols = [_as_vec(c, k, "column") for c in columns]
    return matrix_rank(cols) == k


@lru_cache(maxsize=65536)
def _dual_cone_generators_cached(columns: tuple[Vec, ...], k: int) -> tuple[Vec, ...]:
    if k == 0:
        return ()
    # Duplicate and zero columns do not change the dual cone.
    rows = tuple(dict.fromkeys(c for c in columns if any(c)))
    lin = integer_kernel(rows, k)
    gens: set[Vec] = set()
    for v in lin:
        gens.add(v)
        gens.add(_neg(v))
    r = k - len(lin)
    if r > 0:
        lin_rank = len(lin)
        for t_rows in itertools.combinations(rows, r - 1):
            if matrix_rank(t_rows) != r - 1:
                continue
            # ker(T) contains the lineality space with one extra dimension;
            # any kernel vector outside it spans that quotient line.
            v = None
            for w in integer_kernel(t_rows, k):
                if matrix_rank(lin + (w,)) > lin_rank:
                    v = w
                    break
            if v is None:
                continue
            vals = [_dot(v, c) for c in rows]
            if all(x >= 0 for x in vals):
                gens.add(primitive(v))
            elif all(x <= 0 for x in vals):
                gens.add(primitive(_neg(v)))
    return tuple(sorted(gens))


def dual_cone_generators(columns: Iterable[Sequence[int]], k: int) -> tuple[Vec, ...]:
    """Generators of {lam : lam . c >= 0 for every column c}.

    The list contains the lineality space of the dual cone with both signs
    plus one representative per extreme edge; it may be redundant but it
    always generates.
    """
    cols = tuple(_as_vec(c, k, "column") for c in columns)
    return _dual_cone_generators_cached(cols, k)


@dataclass(frozen=True)
class ConePosition:
    """Where a vector sits relative to the cone spanned by given columns.

    ``witness`` is a dual-cone generator: strictly negative on the vector
    when outside, vanishing on it (but not on the whole cone) when on the
    boundary, and None in the relative interior.
    """

    position: str
    full_dim: bool
    witness: Vec | None


def _integerize(chi: Sequence) -> Vec:
    """Scale a rational vector by a positive integer to make it integral."""
    fracs = [Fraction(x) for x in chi]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    return tuple(int(f * den) for f in fracs)


def cone_position(chi: Sequence, columns: Iterable[Sequence[int]]) -> ConePosition:
    """Classify chi against the cone generated by the columns.

    Positive rescaling of chi does not change the answer, so rational
    input is cleared to integers first.
    """
    chi_int = _integerize(chi)
    k = len(chi_int)
    cols = tuple(_as_vec(c, k, "column") for c in columns)
    full_dim = matrix_rank(cols) == k
    gens = _dual_cone_generators_cached(cols, k)
    boundary_witness = None
    for lam in gens:
        val = _dot(lam, chi_int)
        if val < 0:
            return ConePosition(OUTSIDE, full_dim, lam)
        if val == 0 and boundary_witness is None and any(_dot(lam, c) for c in cols):
            boundary_witness = lam
    if boundary_witness is not None:
        return ConePosition(BOUNDARY, full_dim, boundary_witness)
    return ConePosition(RELATIVE_INTERIOR, full_dim, None)


def positive_functional(columns: Iterable[Sequence[int]], k: int) -> Vec | None:
    """An integer functional strictly positive on every column, or None.

    The sum of the dual cone generators lies in the relative interior of
    the dual cone, so it is strictly positive on a column exactly when
    some dual functional is; None therefore proves that no such
    functional exists (and, by Gordan duality, that the nonnegative
    kernel is nontrivial).
    """
    cols = tuple(_as_vec(c, k, "column") for c in columns)
    gens = _dual_cone_generators_cached(cols, k)
    lam = tuple(sum(g[i] for g in gens) for i in range(k))
    if all(_dot(lam, c) > 0 for c in cols):
        return lam
    return None


def _bounded_solutions(cols: Sequence[Vec], target: Vec, costs: Sequence[int], budget: int) -> list[Vec]:
    """All e >= 0 with sum_j e_j * cols[j] == target, pruned by a strict functional.

    costs[j] > 0 is the functional's value on column j and the functional
    takes value ``budget`` on the target, so exponents are boxed.
    """
    n = len(cols)
    k = len(target)
    out: list[Vec] = []
    e = [0] * n

    def rec(j: int, res: Vec, b: int) -> None:
        if j == n - 1:
            c = costs[j]
            t, rem = divmod(b, c)
            if rem == 0:
                col = cols[j]
                if all(col[i] * t == res[i] for i in range(k)):
                    e[j] = t
                    out.append(tuple(e))
                    e[j] = 0
            return
        col = cols[j]
        c = costs[j]
        for t in range(b // c + 1):
            e[j] = t
            rec(j + 1, tuple(res[i] - col[i] * t for i in range(k)), b - c * t)
        e[j] = 0

    rec(0, target, budget)
    return out


def minimal_homogeneous_solutions(rows: Iterable[Sequence[int]], n: int) -> tuple[Vec, ...]:
    """Componentwise-minimal nonzero solutions of row . x = 0, x >= 0.

    Breadth-first completion: a partial vector x is extended by the unit
    e_i only when <Ax, A e_i> is negative, and anything dominating a
    solution already found is pruned.  This terminates with exactly the
    minimal solutions of the homogeneous system.
    """
    rows = [tuple(r) for r in rows]
    k = len(rows)
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    zero = (0,) * k
    minimals: list[Vec] = []

    def dominates_found(x: Vec) -> bool:
        return any(all(xi >= mi for xi, mi in zip(x, m)) for m in minimals)

    frontier: dict[Vec, Vec] = {}
    for j in range(n):
        unit = tuple(1 if t == j else 0 for t in range(n))
        frontier[unit] = cols[j]
    seen = set(frontier)
    while frontier:
        nxt: dict[Vec, Vec] = {}
        for x, ax in frontier.items():
            if ax == zero:
                if not dominates_found(x):
                    minimals.append(x)
                continue
            for j in range(n):
                if _dot(ax, cols[j]) < 0:
                    y = tuple(v + 1 if t == j else v for t, v in enumerate(x))
                    if y in seen:
                        continue
                    seen.add(y)
                    if dominates_found(y):
                        continue
                    nxt[y] = tuple(a + b for a, b in zip(ax, cols[j]))
        frontier = nxt
    return tuple(sorted(minimals, key=grlex_key))


def _recession_direction(W: IntMatrix) -> Vec:
    """A nonzero u >= 0 with W u = 0; caller guarantees existence."""
    mins = minimal_homogeneous_solutions(W.entries, W.cols)
    if not mins:
        raise RuntimeError("no recession direction found")
    return mins[0]


def _piece_nonempty(W: IntMatrix, target: Vec) -> bool:
    """Is {e >= 0 : W e = target} nonempty?  Exact, via minimal solutions.

    A solution with scaling coordinate 1 in the homogenized system
    [W | -target] decomposes into minimal solutions whose scaling parts
    sum to 1, so nonemptiness shows up in the minimal solutions.
    """
    aug = [W.entries[i] + (-target[i],) for i in range(W.k)]
    mins = minimal_homogeneous_solutions(aug, W.cols + 1)
    return any(s[-1] == 1 for s in mins)


def graded_sections(W: IntMatrix, chi: Sequence[int], m: int) -> GradedSolutionSet:
    """The graded piece {e >= 0 : W e = m chi}, fully enumerated.

    Raises InfiniteSolutionSet (with a recession direction as witness)
    when the piece is infinite, rather than truncating it.
    """
    chi_v = _as_vec(chi, W.k, "character")
    if not isinstance(m, int):
        raise ValueError("degree must be an integer")
    if m < 0:
        raise ValueError("degree must be nonnegative")
    target = tuple(m * x for x in chi_v)
    cols = W.columns()
    lam = positive_functional(cols, W.k)
    if lam is None:
        if _piece_nonempty(W, target):
            raise InfiniteSolutionSet(
                "graded piece is infinite",
                degree=m,
                recession=list(_recession_direction(W)),
            )
        return GradedSolutionSet(m, ())
    budget = _dot(lam, target)
    if budget < 0:
        return GradedSolutionSet(m, ())
    costs = [_dot(lam, c) for c in cols]
    basis = _bounded_solutions(cols, target, costs, budget)
    return GradedSolutionSet(m, sort_monomials(basis))


def is_nonneg_combination(target: Sequence[int], generators: Iterable[Sequence[int]]) -> bool:
    """Is target a nonnegative integer combination of the generators?"""
    tgt = tuple(target)
    gens = [tuple(g) for g in generators]
    gens = [g for g in gens if any(g) and all(gi <= ti for gi, ti in zip(g, tgt))]
    failed: set[Vec] = set()

    def rec(res: Vec) -> bool:
        if not any(res):
            return True
        if res in failed:
            return False
        for g in gens:
            if all(gi <= ri for gi, ri in zip(g, res)):
                if rec(tuple(ri - gi for ri, gi in zip(res, g))):
                    return True
        failed.add(res)
        return False

    return rec(tgt)


def hilbert_basis(
    W: IntMatrix,
    chi: Sequence[int],
    *,
    certify: bool = True,
    certify_degree: int | None = None,
) -> SemigroupBasis:
    """Minimal generators of {(e, m) : W e = m chi, e >= 0, m >= 0}.

    The solution monoid of the homogenized system is always finitely
    generated, so this never raises; degree-zero generators (invariant
    directions) are reported separately and flip ``pointed`` to False.

    When the semigroup is pointed, completeness is optionally re-checked
    by decomposing every element of the graded pieces up to
    ``certify_degree`` (default: four times the largest generator
    degree).
    """
    chi_v = _as_vec(chi, W.k, "character")
    aug = [W.entries[i] + (-chi_v[i],) for i in range(W.k)]
    mins = minimal_homogeneous_solutions(aug, W.cols + 1)
    gens: list[tuple[Vec, int]] = []
    invs: list[Vec] = []
    for sol in mins:
        e, mdeg = sol[:-1], sol[-1]
        if mdeg == 0:
            invs.append(e)
        else:
            gens.append((e, mdeg))
    gens.sort(key=lambda g: (g[1], grlex_key(g[0])))
    invariants = sort_monomials(invs)
    pointed = not invariants
    certified = None
    if certify and pointed:
        bound = certify_degree
        if bound is None:
            bound = 4 * max((m for _, m in gens), default=0)
        flat = [g + (m,) for g, m in gens]
        for mm in range(1, bound + 1):
            for e in graded_sections(W, chi_v, mm).basis:
                if not is_nonneg_combination(e + (mm,), flat):
                    raise RuntimeError(
                        f"generator completeness failed in degree {mm} at {e}"
                    )
        certified = bound
    return SemigroupBasis(tuple(gens), invariants, pointed, certified)
