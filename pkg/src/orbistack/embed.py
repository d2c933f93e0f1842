"""Monomial immersions of weighted projective stacks.

Given a faithful positive degree d' on a source stack, the pipeline
chooses twist data (m0, N, V1, V2): m0 bounds the degrees needed to
generate the section semigroup, N is a descent-admissible twist whose
descended bundle is certified very ample and whose twisted section
modules are globally generated, V1 and V2 are full section spaces.  The
concatenated monomials map the source into a target weighted projective
stack; verification checks chart generation and stabilizer preservation,
and recovery reads the data back off the map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import (
    ChartGenerationFailed,
    InvalidEmbeddingData,
    NotDetAmple,
    RoundTripMismatch,
    StabilizerNotPreserved,
    VeryAmpleCertificationFailed,
)
from .lattice import Vec, _row_hnf, hilbert_basis, integer_kernel, sort_monomials
from .wps import WeightSystem, descent_modulus, is_det_ample, is_faithful, section_basis


@dataclass(frozen=True)
class Certification:
    """How the twist N was chosen, and what was assumed along the way."""

    descent_modulus: int
    candidates_tried: tuple[int, ...]
    first_candidate_passed: bool
    normality_degrees_checked: tuple[int, ...]
    assumption: str

VANISHING_ASSUMPTION = (
    "higher cohomology of the twisted pushforwards is assumed to vanish, "
    "as for nef bundles on a projective toric coarse space"
)


@dataclass(frozen=True)
class EmbeddingData:
    """The full input of the monomial immersion.

    V2_blocks holds one tuple of exponent vectors per degree m = 1..m0
    (empty blocks are kept so the grouping stays positional), and
    coordinates is always V1 followed by the flattened blocks.  Target
    weights are the bundle degrees of the coordinates: N on V1 and
    m + N on block m.
    """

    source: WeightSystem
    dprime: int
    m0: int
    N: int
    V1: tuple[Vec, ...]
    V2_blocks: tuple[tuple[Vec, ...], ...]
    target_weights: tuple[int, ...]
    coordinates: tuple[Vec, ...]
    certification: Certification | None = None

    @property
    def V2(self) -> tuple[Vec, ...]:
        return tuple(v for block in self.V2_blocks for v in block)


@dataclass(frozen=True)
class ChartCheck:
    chart: Vec
    generators_checked: int


@dataclass(frozen=True)
class StratumCheck:
    support: tuple[int, ...]
    stabilizer_order: int
    weight_gcd: int
    lattice_index: int


@dataclass(frozen=True)
class VerifyReport:
    verdict: str
    generation_bound: int
    certified_via: str
    charts: tuple[ChartCheck, ...]
    strata: tuple[StratumCheck, ...]


@dataclass(frozen=True)
class RecoveryReport:
    dprime: int
    N: int
    m0: int
    V1: tuple[Vec, ...]
    V2_blocks: tuple[tuple[Vec, ...], ...]
    matches: bool


@dataclass(frozen=True)
class MorphismReport:
    """Diagnostics for a map given by weighted sections.

    base_locus lists the maximal supports on which every section
    vanishes; the family of such supports is downward closed, so the
    maximal elements determine it.
    """

    well_defined: bool
    polynomial_target: bool
    base_locus: tuple[tuple[int, ...], ...]
    lands_in_stable: bool


def _minimal_elements(vectors) -> list[tuple[int, ...]]:
    """Antichain of componentwise-minimal elements."""
    out: list[tuple[int, ...]] = []
    for v in sorted(set(vectors), key=lambda t: (sum(t), t)):
        if not any(all(o <= x for o, x in zip(m, v)) for m in out):
            out.append(v)
    return out


def _polytope_normality(a: WeightSystem, big_degree: int) -> bool:
    """Degree-one generation certificate for the descended bundle.

    The sections of the descended degree span a lattice simplex of
    dimension n (the descent modulus divides the degree, so the vertices
    are integral).  Lattice points of the j-th dilation decompose as
    j-fold sums automatically once j reaches the dimension, so only
    j = 2 .. n-1 need checking.
    """
    n = len(a.weights) - 1
    if n <= 2:
        return True
    base = section_basis(a, big_degree).basis
    prev = set(base)
    for j in range(2, n):
        cur = section_basis(a, j * big_degree).basis
        for z in cur:
            hit = False
            for g in base:
                rest = tuple(zi - gi for zi, gi in zip(z, g))
                if all(x >= 0 for x in rest) and rest in prev:
                    hit = True
                    break
            if not hit:
                return False
        prev = set(cur)
    return True


def _minimal_in_residue_class(off_weights: Sequence[int], modulus: int, residue: int):
    """Minimal f >= 0 with sum(off_weights[t] f_t) = residue mod modulus.

    Subtracting modulus from any single exponent preserves the class, so
    minimal elements have all entries below the modulus; the box search
    is exhaustive.
    """
    hits = []
    for f in itertools.product(range(modulus), repeat=len(off_weights)):
        if sum(w * x for w, x in zip(off_weights, f)) % modulus == residue:
            hits.append(f)
    return _minimal_elements(hits)


def _globally_generated(a: WeightSystem, dprime: int, m0: int, N: int) -> bool:
    """Do global sections span each twisted module on every coarse chart?

    Chart i inverts coordinate i.  The local twisted module in degree
    c = (m+N)d' is spanned by the off-i exponent patterns whose weighted
    degree is congruent to c mod a_i; global sections surject exactly
    when each minimal pattern dominates the off-i part of some global
    section monomial.
    """
    w = a.weights
    for i, ai in enumerate(w):
        off = [j for j in range(len(w)) if j != i]
        off_w = [w[j] for j in off]
        for m in range(1, m0 + 1):
            c = (m + N) * dprime
            mins = _minimal_in_residue_class(off_w, ai, c % ai)
            if not mins:
                continue
            glob = _minimal_elements(
                tuple(e[j] for j in off) for e in section_basis(a, c).basis
            )
            for p in mins:
                if not any(all(g <= x for g, x in zip(gv, p)) for gv in glob):
                    return False
    return True


def find_embedding_data(a, dprime: int, *, max_candidates: int = 16) -> EmbeddingData:
    """Choose (m0, N, V1, V2) for the degree-dprime bundle on weights a.

    m0 is exact: the largest degree among the minimal generators of the
    section semigroup.  N is the smallest multiple of the descent step
    passing both certificates; candidates stop after max_candidates
    multiples and failure is reported, never silently escalated.
    """
    a = WeightSystem.of(a)
    if not isinstance(dprime, int):
        raise TypeError("bundle degree must be an integer")
    if not is_det_ample(a, dprime):
        _, offender = is_faithful(a, dprime)
        witness = {"weights": list(a.weights), "degree": dprime}
        if offender is not None:
            witness["support"] = list(offender.support)
            witness["stabilizer_order"] = offender.stabilizer_order
        raise NotDetAmple("the requested degree is not det-ample", **witness)

    semigroup = hilbert_basis(a.matrix(), (dprime,), certify=False)
    m0 = semigroup.max_degree()
    step_base = descent_modulus(a)
    step = step_base // gcd(step_base, dprime)
    tried = []
    chosen = None
    for t in range(1, max_candidates + 1):
        candidate = t * step
        normal = _polytope_normality(a, candidate * dprime)
        generated = _globally_generated(a, dprime, m0, candidate) if normal else None
        tried.append({"N": candidate, "normality": normal, "generation": generated})
        if normal and generated:
            chosen = candidate
            break
    if chosen is None:
        raise VeryAmpleCertificationFailed(
            "no tested twist passed both certificates",
            weights=list(a.weights),
            degree=dprime,
            tried=tried,
        )

    V1 = section_basis(a, chosen * dprime).basis
    blocks = tuple(
        section_basis(a, (m + chosen) * dprime).basis for m in range(1, m0 + 1)
    )
    weights_out = [chosen] * len(V1)
    for m, block in enumerate(blocks, start=1):
        weights_out.extend([m + chosen] * len(block))
    coordinates = V1 + tuple(v for block in blocks for v in block)
    certification = Certification(
        descent_modulus=step_base,
        candidates_tried=tuple(item["N"] for item in tried),
        first_candidate_passed=len(tried) == 1,
        normality_degrees_checked=tuple(range(2, max(2, len(a.weights) - 1))),
        assumption=VANISHING_ASSUMPTION,
    )
    return EmbeddingData(
        source=a,
        dprime=dprime,
        m0=m0,
        N=chosen,
        V1=V1,
        V2_blocks=blocks,
        target_weights=tuple(weights_out),
        coordinates=coordinates,
        certification=certification,
    )


def _validate_structure(data: EmbeddingData) -> None:
    """Shape-level invariants only.

    Deliberately does not tie monomial degrees or weights to data.N, so
    bookkeeping inconsistencies surface as verification or recovery
    failures with their own named errors.
    """
    if not isinstance(data.source, WeightSystem):
        raise InvalidEmbeddingData("source must be a WeightSystem")
    a = data.source
    width = len(a.weights)
    if not isinstance(data.dprime, int) or data.dprime < 1:
        raise InvalidEmbeddingData("bundle degree must be a positive integer", degree=data.dprime)
    if not is_det_ample(a, data.dprime):
        raise InvalidEmbeddingData(
            "bundle degree is not det-ample on the source",
            weights=list(a.weights),
            degree=data.dprime,
        )
    if not isinstance(data.m0, int) or data.m0 < 1:
        raise InvalidEmbeddingData("m0 must be a positive integer", m0=data.m0)
    if not isinstance(data.N, int) or data.N < 1:
        raise InvalidEmbeddingData("N must be a positive integer", N=data.N)
    if (data.N * data.dprime) % descent_modulus(a):
        raise InvalidEmbeddingData(
            "the twist degree does not descend",
            N=data.N,
            degree=data.dprime,
            descent_modulus=descent_modulus(a),
        )
    if len(data.V2_blocks) != data.m0:
        raise InvalidEmbeddingData(
            "one block per degree 1..m0 required",
            m0=data.m0,
            blocks=len(data.V2_blocks),
        )
    if not data.V1:
        raise InvalidEmbeddingData("V1 must be nonempty")

    groups = [("V1", data.V1)] + [
        (f"V2[{m}]", block) for m, block in enumerate(data.V2_blocks, start=1)
    ]
    for name, group in groups:
        for v in group:
            if len(v) != width:
                raise InvalidEmbeddingData(
                    f"{name} monomial has the wrong length", monomial=list(v)
                )
            if any(not isinstance(x, int) or x < 0 for x in v):
                raise InvalidEmbeddingData(
                    f"{name} monomial has a negative exponent", monomial=list(v)
                )
            if not any(v):
                raise InvalidEmbeddingData(f"{name} contains the constant monomial")
        if len(set(group)) != len(group) or sort_monomials(group) != tuple(group):
            raise InvalidEmbeddingData(f"{name} is not in canonical order")

    flat = data.V1 + tuple(v for block in data.V2_blocks for v in block)
    if data.coordinates != flat:
        raise InvalidEmbeddingData("coordinates must be V1 followed by the V2 blocks")
    if len(data.target_weights) != len(flat):
        raise InvalidEmbeddingData(
            "one target weight per coordinate required",
            coordinates=len(flat),
            weights=len(data.target_weights),
        )
    if any(not isinstance(x, int) or x < 1 for x in data.target_weights):
        raise InvalidEmbeddingData("target weights must be positive integers")
    base = data.target_weights[0]
    expected = [base] * len(data.V1)
    for m, block in enumerate(data.V2_blocks, start=1):
        expected.extend([base + m] * len(block))
    if list(data.target_weights) != expected:
        raise InvalidEmbeddingData(
            "target weights must be constant on V1 and offset by the block degree"
        )


def _section_generators(data: EmbeddingData):
    basis = hilbert_basis(data.source.matrix(), (data.dprime,), certify=False)
    return basis.generators


def _multiset_reaches(e: Vec, m: int, off: tuple[int, ...], per_block) -> bool:
    """Can block elements with degrees summing to m fit under e off-chart?

    Blocks are scanned in nonincreasing degree so each multiset is tried
    once; failures are memoized on the residual state.
    """
    failed: set[tuple[int, tuple[int, ...], int]] = set()

    def rec(m_rem: int, cap: tuple[int, ...], max_block: int) -> bool:
        if m_rem == 0:
            return True
        key = (m_rem, cap, max_block)
        if key in failed:
            return False
        for mb in range(min(max_block, m_rem), 0, -1):
            for proj in per_block[mb - 1]:
                if all(p <= c for p, c in zip(proj, cap)):
                    if rec(m_rem - mb, tuple(c - p for c, p in zip(cap, proj)), mb):
                        return True
        failed.add(key)
        return False

    return rec(m, tuple(e[j] for j in off), len(per_block))


def _check_chart_generation(data: EmbeddingData) -> tuple[ChartCheck, ...]:
    """On each chart cut out by a V1 monomial, V2 generates the sections.

    The chart's section algebra inverts the chart monomial, so exponents
    on its support are free; a section monomial is generated exactly
    when some multiset of block elements with matching total degree
    fits under it away from the chart support.  The test runs on the
    minimal generators of the section semigroup, which suffices because
    the fitting property is multiplicative.
    """
    generators = _section_generators(data)
    block_sets = [set(block) for block in data.V2_blocks]
    reports = []
    for s in data.V1:
        supp = {j for j, x in enumerate(s) if x}
        off = tuple(j for j in range(len(s)) if j not in supp)
        per_block = [
            sorted({tuple(v[j] for j in off) for v in block})
            for block in data.V2_blocks
        ]
        for e, m in generators:
            padded = tuple(x + y for x, y in zip(e, s))
            if 1 <= m <= len(block_sets) and padded in block_sets[m - 1]:
                continue
            if not _multiset_reaches(e, m, off, per_block):
                raise ChartGenerationFailed(
                    "chart sections are not generated by the designated coordinates",
                    chart=list(s),
                    monomial=list(e),
                    degree=m,
                )
        reports.append(ChartCheck(s, len(generators)))
    return tuple(reports)


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """(g, alpha, beta) with alpha*x + beta*y = g = gcd(x, y), x, y >= 0."""
    old_r, r = x, y
    old_a, a = 1, 0
    old_b, b = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_a, a = a, old_a - q * a
        old_b, b = b, old_b - q * b
    return old_r, old_a, old_b


def _hnf_rows(rows):
    h, rank = _row_hnf(rows)
    return [row for row in h[:rank] if any(row)], rank


def _lattice_index(s_idx, weights_a, members) -> int:
    """Index of the weight-kernel image inside the stratum relation lattice.

    members are (target weight, coordinate) pairs supported inside the
    stratum.  The kernel of the single weight form is generated by one
    new relation per member against a running Bezout combination, so the
    image lattice is built in one pass.  Returns 0 for infinite index or
    an image not contained in the relation lattice.
    """
    d = len(s_idx)
    relation_basis = integer_kernel([tuple(weights_a[j] for j in s_idx)], d)
    target_rank = len(relation_basis)

    gens: list[list[int]] = []
    g = 0
    bezout: list[int] = [0] * d
    for wt, vec in members:
        u = [vec[j] for j in s_idx]
        if g == 0:
            g, bezout = wt, u
            continue
        g2, alpha, beta = _ext_gcd(g, wt)
        gens.append([(wt // g2) * r - (g // g2) * x for r, x in zip(bezout, u)])
        if g2 != g:
            bezout = [alpha * r + beta * x for r, x in zip(bezout, u)]
            g = g2
    image_rows, image_rank = _hnf_rows(gens) if gens else ([], 0)
    if image_rank < target_rank:
        return 0 if target_rank else 1

    # Express each image row in the relation basis; saturation of the
    # kernel makes integral coordinates automatic once the row lies in
    # the rational span.
    coeff_rows = []
    for row in image_rows:
        if sum(weights_a[j] * x for j, x in zip(s_idx, row)):
            return 0
        coords = _solve_in_basis(relation_basis, row)
        if coords is None:
            return 0
        coeff_rows.append(coords)
    reduced, rank = _hnf_rows(coeff_rows)
    if rank < target_rank:
        return 0
    # Pivot product of the square HNF is the lattice index.
    index = 1
    for i in range(target_rank):
        pivot = next(x for x in reduced[i] if x)
        index *= abs(pivot)
    return index


def _solve_in_basis(basis, row):
    """Integer coordinates of row in the given lattice basis, or None."""
    if not basis:
        return None if any(row) else []
    cols = len(basis[0])
    aug = [[Fraction(basis[i][c]) for i in range(len(basis))] + [Fraction(row[c])] for c in range(cols)]
    m = len(basis)
    pivot_row = 0
    pivots = []
    for col in range(m):
        piv = next((r for r in range(pivot_row, len(aug)) if aug[r][col]), None)
        if piv is None:
            continue
        aug[pivot_row], aug[piv] = aug[piv], aug[pivot_row]
        inv = aug[pivot_row][col]
        aug[pivot_row] = [x / inv for x in aug[pivot_row]]
        for r in range(len(aug)):
            if r != pivot_row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    for r in range(pivot_row, len(aug)):
        if aug[r][m]:
            return None
    coords = [Fraction(0)] * m
    for r, col in enumerate(pivots):
        coords[col] = aug[r][m]
    out = []
    for x in coords:
        if x.denominator != 1:
            return None
        out.append(int(x))
    return out


def _check_stratum_separation(data: EmbeddingData) -> tuple[StratumCheck, ...]:
    """Every stratum keeps its stabilizer order and character lattice.

    For support S the coordinates supported inside S must have target
    weights with gcd equal to the stratum's stabilizer order, and the
    differences of their exponent patterns (through the weight kernel)
    must fill the stratum's relation lattice with index one.
    """
    a = data.source.weights
    width = len(a)
    supports_of = [frozenset(j for j, x in enumerate(v) if x) for v in data.coordinates]
    reports = []
    for size in range(1, width + 1):
        for s in itertools.combinations(range(width), size):
            s_set = set(s)
            members = [
                (data.target_weights[t], data.coordinates[t])
                for t, sp in enumerate(supports_of)
                if sp <= s_set
            ]
            g_s = gcd(*(a[j] for j in s))
            if not members:
                raise StabilizerNotPreserved(
                    "no coordinate is supported inside the stratum",
                    support=list(s),
                    index=None,
                )
            weight_gcd = 0
            for wt, _ in members:
                weight_gcd = gcd(weight_gcd, wt)
            if weight_gcd != g_s:
                raise StabilizerNotPreserved(
                    "coordinate weights do not realize the stabilizer order",
                    support=list(s),
                    weight_gcd=weight_gcd,
                    stabilizer_order=g_s,
                    index=None,
                )
            index = _lattice_index(s, a, members)
            if index != 1:
                raise StabilizerNotPreserved(
                    "coordinate differences miss part of the stratum lattice",
                    support=list(s),
                    index=index if index else None,
                )
            reports.append(StratumCheck(s, g_s, weight_gcd, index))
    return tuple(reports)


def verify_immersion(data: EmbeddingData, *, generation_bound: int | None = None) -> VerifyReport:
    """Certify that the monomial map is an immersion preserving stabilizers.

    Two independent checks must pass: chart generation (the sections on
    each V1 chart are generated by V2 over the inverted chart monomial)
    and stratum separation (weights and exponent differences reproduce
    each stratum's stabilizer and character lattice).  Chart generation
    is certified on the semigroup generators, which covers every degree;
    the reported bound is the nominal sweep depth that a direct
    enumeration would use.
    """
    _validate_structure(data)
    bound = generation_bound
    if bound is None:
        bound = 2 * (data.m0 + data.N) * data.dprime
    charts = _check_chart_generation(data)
    strata = _check_stratum_separation(data)
    return VerifyReport(
        verdict="pass",
        generation_bound=bound,
        certified_via="semigroup-generators",
        charts=charts,
        strata=strata,
    )


def recover_data(data: EmbeddingData) -> RecoveryReport:
    """Read (d', N, m0, V1, V2) back off the coordinates and compare.

    The bundle degree is the common ratio of weighted monomial degree to
    target weight, N is the least target weight, m0 the weight spread,
    V1 the least-weight coordinates and the blocks the rest grouped by
    weight offset.  The first stored field that disagrees is reported.
    """
    _validate_structure(data)
    a = data.source
    deg0 = a.degree(data.coordinates[0])
    w0 = data.target_weights[0]
    if deg0 % w0:
        raise RoundTripMismatch(
            "no integer bundle degree matches the first coordinate",
            field="dprime",
            monomial=list(data.coordinates[0]),
            weight=w0,
        )
    d_hat = deg0 // w0
    for v, wt in zip(data.coordinates, data.target_weights):
        if a.degree(v) != d_hat * wt:
            raise RoundTripMismatch(
                "coordinate degrees are not proportional to target weights",
                field="dprime",
                monomial=list(v),
                weight=wt,
            )
    if d_hat != data.dprime:
        raise RoundTripMismatch(
            "recovered bundle degree differs",
            field="dprime",
            stored=data.dprime,
            recovered=d_hat,
        )
    n_hat = min(data.target_weights)
    if n_hat != data.N:
        raise RoundTripMismatch(
            "recovered twist differs", field="N", stored=data.N, recovered=n_hat
        )
    m0_hat = max(data.target_weights) - n_hat
    if m0_hat != data.m0:
        raise RoundTripMismatch(
            "recovered generation degree differs",
            field="m0",
            stored=data.m0,
            recovered=m0_hat,
        )
    v1_hat = tuple(
        v for v, wt in zip(data.coordinates, data.target_weights) if wt == n_hat
    )
    if v1_hat != data.V1:
        raise RoundTripMismatch("recovered V1 differs", field="V1")
    blocks_hat = tuple(
        tuple(
            v
            for v, wt in zip(data.coordinates, data.target_weights)
            if wt == n_hat + m
        )
        for m in range(1, m0_hat + 1)
    )
    if blocks_hat != data.V2_blocks:
        raise RoundTripMismatch("recovered V2 differs", field="V2")
    return RecoveryReport(d_hat, n_hat, m0_hat, v1_hat, blocks_hat, True)


def morphism_from_sections(a, dprime: int, sections) -> MorphismReport:
    """Diagnose the map to weighted projective space given by tagged sections.

    Each section is (exponent vector, target weight alpha); the map is
    well defined when every weighted degree equals alpha * dprime, and
    the target action is polynomial when every alpha is nonnegative.
    """
    a = WeightSystem.of(a)
    if not isinstance(dprime, int) or dprime < 1:
        raise ValueError("bundle degree must be a positive integer")
    entries = []
    for e, alpha in sections:
        vec = tuple(int(x) for x in e)
        if len(vec) != len(a.weights) or any(x < 0 for x in vec):
            raise ValueError(f"bad exponent vector {e!r}")
        entries.append((vec, int(alpha)))
    well_defined = all(a.degree(e) == alpha * dprime for e, alpha in entries)
    polynomial = all(alpha >= 0 for _, alpha in entries)
    supports = [frozenset(j for j, x in enumerate(e) if x) for e, _ in entries]
    width = len(a.weights)
    maximal: list[tuple[int, ...]] = []
    for size in range(width, 0, -1):
        for s in itertools.combinations(range(width), size):
            s_set = set(s)
            if any(sp <= s_set for sp in supports):
                continue
            if any(s_set <= set(m) for m in maximal):
                continue
            maximal.append(s)
    base_locus = tuple(sorted(maximal, key=lambda t: (len(t), t)))
    return MorphismReport(well_defined, polynomial, base_locus, not base_locus)
