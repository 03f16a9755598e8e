"""Rate-region machinery: the rank outer bound, exact m-shot search over
two code classes, finite-depth time sharing, and the odd/even
characteristic comparison on the benchmark 3x3 channel."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, prod
from typing import Iterator, Sequence

from concurrent.futures import ThreadPoolExecutor

from .channel import (
    Lmuc,
    MCode,
    RatePoint,
    all_codewords,
    apply_block,
    combine,
    is_unambiguous,
    make_mcode,
)
from .gf import (
    FieldSpec,
    canonical_field,
    enumerate_subspaces,
    field_from_order,
    mat_from_rows,
    mat_rank,
    span_elements,
)

DEFAULT_CAP_PART = 16  # max q^(s_i * m) per part for all-subsets search
DEFAULT_CAP_TOTAL = 10_000_000  # max candidate codes per search


class SearchLimitError(ValueError):
    def __init__(self, estimate: int, allowed: int, what: str):
        super().__init__(
            f"{what}: estimated {estimate} candidates exceeds the cap of {allowed}"
        )
        self.estimate = estimate
        self.allowed = allowed


@dataclass(frozen=True)
class BoundInequality:
    """sum_{i in I} alpha_i <= rhs (I holds 1-based pair indices)."""

    I: tuple[int, ...]
    j: int
    rhs: int


@dataclass(frozen=True)
class BoundSet:
    inequalities: tuple[BoundInequality, ...]

    def min_rhs(self, I: Sequence[int]) -> int:
        key = tuple(sorted(I))
        return min(iq.rhs for iq in self.inequalities if iq.I == key)

    def admits(self, m: int, u: tuple[int, ...], q: int) -> bool:
        """Exact integer check: prod_{i in I} u_i <= q^(m * rhs) for each I."""
        for iq in self.inequalities:
            if prod(u[i - 1] for i in iq.I) > q ** (m * iq.rhs):
                return False
        return True

    def to_json(self) -> list[dict]:
        return [
            {"I": list(iq.I), "j": iq.j, "rhs": iq.rhs} for iq in self.inequalities
        ]


def outer_bound(lmuc: Lmuc) -> BoundSet:
    """Rank outer bound: for every non-empty I and j in I,
    sum_{i in I} alpha_i <= rank F_{I,j} - rank F_{I\\{j},j} + sum_{k in I, k != j} s_k.
    Rank-based, hence independent of the number of shots."""
    out = []
    indices = list(range(lmuc.n))
    for r in range(1, lmuc.n + 1):
        for I in itertools.combinations(indices, r):
            for j in I:
                rest = [i for i in I if i != j]
                rank_full = mat_rank(lmuc.block_stack(I, j))
                rank_rest = mat_rank(lmuc.block_stack(rest, j)) if rest else 0
                rhs = rank_full - rank_rest + sum(lmuc.s[k] for k in rest)
                out.append(
                    BoundInequality(tuple(i + 1 for i in I), j + 1, rhs)
                )
    return BoundSet(tuple(out))


def n1_capacity(lmuc: Lmuc) -> int:
    """Single-pair channels: the region is exactly {alpha <= rank F}."""
    if lmuc.n != 1:
        raise ValueError(f"n1_capacity requires n=1, got n={lmuc.n}")
    return mat_rank(lmuc.F)


@dataclass(frozen=True)
class AchievedPoint:
    u: tuple[int, ...]
    witness: MCode

    def rate_point(self, m: int) -> RatePoint:
        return RatePoint(m, self.u)


@dataclass(frozen=True)
class RegionReport:
    m: int
    code_class: str  # "all-subsets" | "base-linear"
    achieved: tuple[AchievedPoint, ...]  # maximal points, lexicographic by u
    bound: BoundSet
    exhaustive: bool
    field: FieldSpec = dc_field(compare=False, default=None)

    def achieved_tuples(self) -> list[tuple[int, ...]]:
        return [a.u for a in self.achieved]

    def contains_cardinalities(self, u: tuple[int, ...]) -> bool:
        return any(all(x >= y for x, y in zip(a.u, u)) for a in self.achieved)

    def to_json(self) -> dict:
        q = self.field.q
        return {
            "m": self.m,
            "class": self.code_class,
            "achieved": [
                {
                    "u": list(a.u),
                    "alpha": [
                        round(x, 6) for x in RatePoint(self.m, a.u).alphas(q)
                    ],
                    "witness": a.witness.to_json(),
                }
                for a in self.achieved
            ],
            "bounds": self.bound.to_json(),
            "exhaustive": self.exhaustive,
        }


def _maximal(points: dict[tuple[int, ...], MCode]) -> tuple[AchievedPoint, ...]:
    keys = sorted(points)
    maximal = [
        u
        for u in keys
        if not any(
            v != u and all(a >= b for a, b in zip(v, u)) for v in keys
        )
    ]
    return tuple(AchievedPoint(u, points[u]) for u in maximal)


class _SubsetChecker:
    """Unambiguity test specialized for the all-subsets walk: every candidate
    draws codewords from the same small per-part spaces, so the block images
    and pairwise image differences are computed once up front."""

    def __init__(self, lmuc: Lmuc, m: int, spaces: Sequence[Sequence[tuple[int, ...]]]):
        self.lmuc = lmuc
        self.m = m
        fld = lmuc.field
        n = lmuc.n
        self.img = [
            [
                {w: apply_block(w, lmuc.s[j], m, lmuc.block(j, i)) for w in spaces[j]}
                for i in range(n)
            ]
            for j in range(n)
        ]
        # per-terminal pairwise image differences under the diagonal block
        self.pair_diff = []
        for i in range(n):
            imgs = self.img[i][i]
            self.pair_diff.append(
                {
                    (x1, x2): fld.vec_sub(imgs[x1], imgs[x2])
                    for x1 in spaces[i]
                    for x2 in spaces[i]
                    if x1 != x2
                }
            )

    def check(self, parts: Sequence[Sequence[tuple[int, ...]]]) -> bool:
        lmuc = self.lmuc
        fld = lmuc.field
        n = lmuc.n
        for i in range(n):
            part = parts[i]
            if len(part) > 1:
                img_to_i = self.img
                others = [j for j in range(n) if j != i]
                is_i = {(0,) * (lmuc.t[i] * self.m)}
                for j in others:
                    table = img_to_i[j][i]
                    is_i = {fld.vec_add(y, table[c]) for y in is_i for c in parts[j]}
                delta = {fld.vec_sub(a, b) for a in is_i for b in is_i}
                diffs = self.pair_diff[i]
                for a in range(len(part)):
                    for b in range(a + 1, len(part)):
                        if diffs[(part[a], part[b])] in delta:
                            return False
        return True


def _first_hit(candidates, predicate, jobs: int, counter: list[int], cap: int):
    """First candidate (in stream order) satisfying the predicate, counting
    examined candidates against the cap; deterministic for any job count."""
    if jobs <= 1:
        for cand in candidates:
            counter[0] += 1
            if counter[0] > cap:
                raise _CapHit()
            if predicate(cand):
                return cand
        return None
    it = iter(candidates)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        while True:
            batch = list(itertools.islice(it, 64 * jobs))
            if not batch:
                return None
            for cand, ok in zip(batch, pool.map(predicate, batch)):
                counter[0] += 1
                if counter[0] > cap:
                    raise _CapHit()
                if ok:
                    return cand


class _CapHit(Exception):
    pass


def _linear_candidates(
    lmuc: Lmuc, m: int, dims: tuple[int, ...], bound_part: int
) -> Iterator[MCode]:
    """Every product of GF(q)-linear parts with the given dimensions."""
    fld = lmuc.field
    streams = [
        list(enumerate_subspaces(lmuc.s[i] * m, dims[i], fld, bound=bound_part))
        for i in range(lmuc.n)
    ]
    for bases in itertools.product(*streams):
        parts = [
            sorted(span_elements(basis, fld, length=lmuc.s[i] * m))
            for i, basis in enumerate(bases)
        ]
        yield make_mcode(m, parts, linear=True)


def search_region(
    lmuc: Lmuc,
    m: int,
    code_class: str = "base-linear",
    cap_part: int = DEFAULT_CAP_PART,
    cap_total: int = DEFAULT_CAP_TOTAL,
    jobs: int = 1,
) -> RegionReport:
    """Exact m-shot region over the requested code class.

    all-subsets: every cardinality tuple admitting an unambiguous code made
    of arbitrary subsets (the full region within caps). base-linear: parts
    restricted to GF(q)-linear subspaces of the shot-matrix space, a
    certified inner bound. Tuples violating the rank outer bound are pruned;
    dominated tuples are skipped via monotonicity. Reported points are the
    maximal achieved tuples with stored witnesses.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if code_class not in ("all-subsets", "base-linear"):
        raise ValueError(f"unknown code class {code_class!r}")
    q = lmuc.field.q
    bound = outer_bound(lmuc)
    achieved: dict[tuple[int, ...], MCode] = {}

    def dominated(u: tuple[int, ...]) -> bool:
        return any(all(a >= b for a, b in zip(v, u)) for v in achieved)

    # cap_total meters candidates actually examined rather than refusing up
    # front: monotonicity and outer-bound pruning usually cut the walked
    # space far below the worst-case count.
    examined = [0]

    if code_class == "base-linear":
        dims_lists = [range(lmuc.s[i] * m, -1, -1) for i in range(lmuc.n)]
        tuples = sorted(
            itertools.product(*dims_lists), key=lambda d: (-sum(d), d)
        )
        worst_case = sum(
            prod(_gaussian(lmuc.s[i] * m, d[i], q) for i in range(lmuc.n))
            for d in tuples
            if bound.admits(m, tuple(q**di for di in d), q)
        )
        try:
            for dims in tuples:
                u = tuple(q**d for d in dims)
                if not bound.admits(m, u, q) or dominated(u):
                    continue
                hit = _first_hit(
                    _linear_candidates(lmuc, m, dims, bound_part=2**20),
                    lambda code: is_unambiguous(lmuc, code)[0],
                    jobs,
                    examined,
                    cap_total,
                )
                if hit is not None:
                    achieved[u] = hit
        except _CapHit:
            raise SearchLimitError(worst_case, cap_total, "base-linear search")
        exhaustive = True
    else:
        space_sizes = [q ** (lmuc.s[i] * m) for i in range(lmuc.n)]
        for i, size in enumerate(space_sizes):
            if size > cap_part:
                raise SearchLimitError(size, cap_part, f"part {i + 1} alphabet")
        spaces = [all_codewords(lmuc.s[i], m, lmuc.field) for i in range(lmuc.n)]
        checker = _SubsetChecker(lmuc, m, spaces)
        u_lists = [range(size, 0, -1) for size in space_sizes]
        tuples = sorted(
            itertools.product(*u_lists), key=lambda u: (-prod(u), u)
        )
        admissible = [u for u in tuples if bound.admits(m, u, q)]
        worst_case = sum(
            prod(comb(space_sizes[i], u[i]) for i in range(lmuc.n))
            for u in admissible
        )
        try:
            for u in admissible:
                if dominated(u):
                    continue
                candidates = itertools.product(
                    *(itertools.combinations(spaces[i], u[i]) for i in range(lmuc.n))
                )
                hit = _first_hit(
                    candidates, checker.check, jobs, examined, cap_total
                )
                if hit is not None:
                    achieved[u] = make_mcode(m, hit)
        except _CapHit:
            raise SearchLimitError(worst_case, cap_total, "all-subsets search")
        exhaustive = True

    return RegionReport(
        m=m,
        code_class=code_class,
        achieved=_maximal(achieved),
        bound=bound,
        exhaustive=exhaustive,
        field=lmuc.field,
    )


def _gaussian(d: int, r: int, q: int) -> int:
    from .gf import gaussian_binomial

    return gaussian_binomial(d, r, q)


@dataclass(frozen=True)
class SharedPoint:
    point: RatePoint
    witness: MCode


def time_share_closure(
    lmuc: Lmuc,
    seeds: Sequence[SharedPoint],
    depth: int,
) -> list[SharedPoint]:
    """Close the seed set under pairwise concatenation up to `depth` total
    shots, returning the maximal points. Every witness is re-verified; this
    is an inner approximation of the convex hull at denominator <= depth."""
    for sp in seeds:
        ok, _ = is_unambiguous(lmuc, sp.witness)
        if not ok:
            raise ValueError(f"seed witness for u={sp.point.u} fails re-verification")
    pool: dict[tuple[int, tuple[int, ...]], MCode] = {
        (sp.point.m, sp.point.u): sp.witness for sp in seeds
    }
    frontier = dict(pool)
    while frontier:
        new: dict[tuple[int, tuple[int, ...]], MCode] = {}
        for (m1, u1), c1 in sorted(frontier.items()):
            for (m2, u2), c2 in sorted(pool.items()):
                if m1 + m2 > depth:
                    continue
                key = (m1 + m2, tuple(a * b for a, b in zip(u1, u2)))
                if key in pool or key in new:
                    continue
                new[key] = combine(c1, c2)
        pool.update(new)
        frontier = new

    points = [SharedPoint(RatePoint(m, u), code) for (m, u), code in pool.items()]
    maximal = [
        sp
        for sp in points
        if not any(
            other is not sp
            and other.point.dominates(sp.point)
            and not sp.point.dominates(other.point)
            for other in points
        )
    ]
    # equal-rate points at several m collapse to the fewest-shot witness
    maximal.sort(key=lambda sp: (sp.point.m, sp.point.u))
    deduped: list[SharedPoint] = []
    for sp in maximal:
        if not any(
            kept.point.dominates(sp.point) and sp.point.dominates(kept.point)
            for kept in deduped
        ):
            deduped.append(sp)
    return deduped


# ----------------------------------------------------------------------
# The benchmark channel with a {0,1} transfer matrix (valid over any field)

BENCH_F_ROWS = ((1, 1, 1), (1, 1, 0), (1, 0, 1))


def benchmark_lmuc(fld: FieldSpec) -> Lmuc:
    """The 2-pair channel with s=(1,2), t=(1,2) and the fixed {0,1} matrix
    whose region separates odd from even characteristic."""
    return Lmuc(
        field=fld,
        n=2,
        s=(1, 2),
        t=(1, 2),
        F=mat_from_rows([list(r) for r in BENCH_F_ROWS], fld),
    )


def build_even_char_code(m: int, n: int) -> tuple[Lmuc, MCode]:
    """Base-field-linear code on the benchmark channel over GF(2), m shots:
    C_1 spans the first n unit shot-vectors, C_2 spans the remaining unit
    shot-vectors placed in either row. Rate (n/m, 2(1 - n/m)); verified
    unambiguous before returning."""
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    f2 = canonical_field(2, 1)
    lmuc = benchmark_lmuc(f2)

    def unit(length: int, pos: int) -> tuple[int, ...]:
        return tuple(1 if i == pos else 0 for i in range(length))

    c1_gens = [unit(m, i) for i in range(n)]
    c2_gens = []
    for i in range(n, m):
        c2_gens.append(unit(2 * m, i))  # (e_i, 0): row 1 shot i
        c2_gens.append(unit(2 * m, m + i))  # (0, e_i): row 2 shot i
    part1 = sorted(span_elements(c1_gens, f2, length=m))
    part2 = sorted(span_elements(c2_gens, f2, length=2 * m))
    code = make_mcode(m, [part1, part2], linear=True)
    ok, witness = is_unambiguous(lmuc, code)
    if not ok:
        raise AssertionError(f"constructed code is ambiguous: {witness}")
    return lmuc, code


@dataclass(frozen=True)
class CharFieldResult:
    q: int
    m: int
    code_class: str
    achieves_one_one: bool
    max_weighted: Fraction | None  # max of 2*alpha_1 + alpha_2, exact
    achieved: tuple[tuple[int, ...], ...]


def _max_weighted(m: int, achieved: Sequence[tuple[int, ...]], q: int) -> Fraction | None:
    """Exact max of 2*alpha_1 + alpha_2 over achieved tuples; only defined
    when cardinalities are powers of q (all search outputs here are)."""
    best: Fraction | None = None
    for u in achieved:
        exact = RatePoint(m, u).alpha_exact(q)
        if exact is None:
            continue
        val = 2 * exact[0] + exact[1]
        if best is None or val > best:
            best = val
    return best


def char_experiment(
    q_list: Sequence[int],
    m_max: int,
    cap_part: int = DEFAULT_CAP_PART,
    cap_total: int = DEFAULT_CAP_TOTAL,
) -> list[CharFieldResult]:
    """For each field order, search the benchmark channel's region for every
    m <= m_max and record whether rate (1,1) is achieved and the exact max
    of 2*alpha_1 + alpha_2. all-subsets is used whenever the part alphabets
    fit the cap, else the base-linear class."""
    results = []
    for q in q_list:
        fld = field_from_order(q)
        lmuc = benchmark_lmuc(fld)
        for m in range(1, m_max + 1):
            sizes = [q ** (s * m) for s in lmuc.s]
            if max(sizes) <= cap_part:
                code_class = "all-subsets"
            else:
                code_class = "base-linear"
            report = search_region(
                lmuc, m, code_class, cap_part=cap_part, cap_total=cap_total
            )
            tuples = report.achieved_tuples()
            one_one = report.contains_cardinalities((q**m, q**m))
            results.append(
                CharFieldResult(
                    q=q,
                    m=m,
                    code_class=code_class,
                    achieves_one_one=one_one,
                    max_weighted=_max_weighted(m, tuples, q),
                    achieved=tuple(tuples),
                )
            )
    return results
