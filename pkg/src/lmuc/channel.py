"""The algebraic channel: linear multiple-unicast channels, m-shot external
codes, fan-out / interference sets, unambiguity, and decoding.

A codeword of part i is a flat row-major tuple of length s_i * m over GF(q):
row r holds the m shots of source coordinate r. The channel acts shot-wise,
so no extension-field arithmetic is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import log, prod
from typing import Iterable, Sequence

from .gf import (
    DEFAULT_ENUM_BOUND,
    FieldSpec,
    Mat,
    field_from_json,
    mat_from_json,
    span as gf_span,
)

# Largest interference set whose difference set is materialized for the
# fast unambiguity path.
DEFAULT_DELTA_IS_BOUND = 4096


@dataclass(frozen=True)
class Lmuc:
    field: FieldSpec
    n: int
    s: tuple[int, ...]
    t: tuple[int, ...]
    F: Mat

    def __post_init__(self):
        if self.n < 1 or len(self.s) != self.n or len(self.t) != self.n:
            raise ValueError("s and t must have length n >= 1")
        if any(v < 1 for v in self.s + self.t):
            raise ValueError("all s_i and t_i must be >= 1")
        if (self.F.rows, self.F.cols) != (sum(self.s), sum(self.t)):
            raise ValueError(
                f"F has shape {self.F.rows}x{self.F.cols}, expected "
                f"{sum(self.s)}x{sum(self.t)}"
            )

    def _row_range(self, i: int) -> range:
        off = sum(self.s[:i])
        return range(off, off + self.s[i])

    def _col_range(self, j: int) -> range:
        off = sum(self.t[:j])
        return range(off, off + self.t[j])

    def block(self, i: int, j: int) -> Mat:
        """The s_i x t_j block of F (0-based pair indices)."""
        return self.F.submatrix(self._row_range(i), self._col_range(j))

    def block_stack(self, I: Sequence[int], j: int) -> Mat:
        """Blocks (i, j) for i in I, stacked by increasing i."""
        rows = [r for i in sorted(I) for r in self._row_range(i)]
        return self.F.submatrix(rows, self._col_range(j))

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "n": self.n,
            "s": list(self.s),
            "t": list(self.t),
            "F": self.F.to_json(),
        }


def lmuc_from_json(obj: dict) -> Lmuc:
    fld = field_from_json(obj["field"])
    return Lmuc(
        field=fld,
        n=int(obj["n"]),
        s=tuple(int(v) for v in obj["s"]),
        t=tuple(int(v) for v in obj["t"]),
        F=mat_from_json(obj["F"], fld),
    )


Codeword = tuple[int, ...]


@dataclass(frozen=True)
class MCode:
    m: int
    parts: tuple[tuple[Codeword, ...], ...]
    # Caller's assertion that every part is a GF(q)-linear subspace; enables
    # the quotient-injectivity fast path in is_unambiguous.
    linear: bool = dc_field(default=False, compare=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        for i, part in enumerate(self.parts):
            if not part:
                raise ValueError(f"part {i + 1} is empty")
            if len(set(part)) != len(part):
                raise ValueError(f"part {i + 1} has duplicate codewords")
            if len({len(c) for c in part}) != 1:
                raise ValueError(f"part {i + 1} has codewords of mixed shape")

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def to_json(self) -> dict:
        return {"m": self.m, "parts": [[list(c) for c in p] for p in self.parts]}


def mcode_from_json(obj: dict) -> MCode:
    return MCode(
        m=int(obj["m"]),
        parts=tuple(
            tuple(sorted(tuple(int(v) for v in c) for c in part))
            for part in obj["parts"]
        ),
        linear=bool(obj.get("linear", False)),
    )


def make_mcode(
    m: int, parts: Sequence[Iterable[Sequence[int]]], linear: bool = False
) -> MCode:
    return MCode(
        m, tuple(tuple(sorted(tuple(c) for c in part)) for part in parts), linear
    )


@dataclass(frozen=True)
class RatePoint:
    """Rates are kept exact as (m, cardinalities); alpha_i = log u_i / (m log q)."""

    m: int
    u: tuple[int, ...]

    def __post_init__(self):
        if any(v < 1 for v in self.u):
            raise ValueError("cardinalities must be >= 1")

    def alphas(self, q: int) -> tuple[float, ...]:
        return tuple(log(ui) / (self.m * log(q)) for ui in self.u)

    def alpha_exact(self, q: int) -> tuple[Fraction, ...] | None:
        """Exact rates when every u_i is a power of q, else None."""
        out = []
        for ui in self.u:
            d, v = 0, ui
            while v % q == 0:
                v //= q
                d += 1
            if v != 1:
                return None
            out.append(Fraction(d, self.m))
        return tuple(out)

    def dominates(self, other: "RatePoint") -> bool:
        """Coordinate-wise rate comparison, exact via cross-powers."""
        return all(
            o ** self.m <= u ** other.m for u, o in zip(self.u, other.u, strict=True)
        )


# ----------------------------------------------------------------------
# Shot-wise linear action


def apply_block(x: Codeword, rows: int, m: int, block: Mat) -> tuple[int, ...]:
    """x (rows x m, flat) -> x @ block per shot, giving block.cols x m flat."""
    fld = block.field
    out = [0] * (block.cols * m)
    for r in range(rows):
        for c in range(block.cols):
            coeff = block[r, c]
            if coeff:
                for shot in range(m):
                    out[c * m + shot] = fld.add(
                        out[c * m + shot], fld.mul(coeff, x[r * m + shot])
                    )
    return tuple(out)


def simulate(lmuc: Lmuc, x: Sequence[Codeword], m: int) -> list[tuple[int, ...]]:
    """Channel law: y_i = sum_j x_j F_{j,i}, shot-wise."""
    if len(x) != lmuc.n:
        raise ValueError(f"expected {lmuc.n} inputs, got {len(x)}")
    for i, xi in enumerate(x):
        if len(xi) != lmuc.s[i] * m:
            raise ValueError(
                f"input {i + 1} has length {len(xi)}, expected {lmuc.s[i]}x{m}"
            )
    fld = lmuc.field
    ys = []
    for i in range(lmuc.n):
        y = (0,) * (lmuc.t[i] * m)
        for j in range(lmuc.n):
            y = fld.vec_add(y, apply_block(x[j], lmuc.s[j], m, lmuc.block(j, i)))
        ys.append(y)
    return ys


def interference_set(lmuc: Lmuc, code: MCode, i: int) -> set[tuple[int, ...]]:
    """IS_i(C): every interference pattern the other sources can cause at T_i."""
    fld = lmuc.field
    others = [j for j in range(lmuc.n) if j != i]
    out = set()
    for combo in itertools.product(*(code.parts[j] for j in others)):
        y = (0,) * (lmuc.t[i] * code.m)
        for j, cj in zip(others, combo):
            y = fld.vec_add(y, apply_block(cj, lmuc.s[j], code.m, lmuc.block(j, i)))
        out.add(y)
    return out


def fan_out(lmuc: Lmuc, code: MCode, i: int, x: Codeword) -> set[tuple[int, ...]]:
    """Fan_i(x, C) via the translate identity: x F_{i,i} + IS_i(C)."""
    if x not in code.parts[i]:
        raise ValueError("x is not a codeword of part i")
    fld = lmuc.field
    base = apply_block(x, lmuc.s[i], code.m, lmuc.block(i, i))
    return {fld.vec_add(base, z) for z in interference_set(lmuc, code, i)}


def fan_out_direct(lmuc: Lmuc, code: MCode, i: int, x: Codeword) -> set[tuple[int, ...]]:
    """Fan_i(x, C) straight from the definition; oracle for fan_out."""
    out = set()
    others = [j for j in range(lmuc.n) if j != i]
    for combo in itertools.product(*(code.parts[j] for j in others)):
        inputs = list(combo)
        inputs.insert(i, x)
        out.add(simulate(lmuc, inputs, code.m)[i])
    return out


@dataclass(frozen=True)
class AmbiguityWitness:
    i: int  # 1-based pair index
    x1: Codeword
    x2: Codeword
    common_output: tuple[int, ...]


def is_unambiguous(
    lmuc: Lmuc,
    code: MCode,
    delta_bound: int = DEFAULT_DELTA_IS_BOUND,
) -> tuple[bool, AmbiguityWitness | None]:
    """Fan-out disjointness for every pair, via the translate identity:
    Fan_i(x1) meets Fan_i(x2) iff (x1 - x2) F_{i,i} lies in the difference
    set of IS_i(C). Falls back to direct set intersection when the
    difference set would be too large to materialize.

    For codes flagged linear, each part is checked by a pure rank argument:
    the induced map C_i -> GF(q)^(t_i m) / IS_i(C) is injective iff stacking
    the F_{i,i}-images of a basis of C_i on a basis of IS_i(C) has full rank.

    The first witness in (i, x1, x2) lexicographic order is returned on
    ambiguity, so results are deterministic.
    """
    fld = lmuc.field
    for i in range(lmuc.n):
        part = sorted(code.parts[i])
        if len(part) == 1:
            continue
        if code.linear and _linear_unambiguous_at(lmuc, code, i):
            continue
        is_i = interference_set(lmuc, code, i)
        delta: set[tuple[int, ...]] | None = None
        if len(is_i) ** 2 <= delta_bound:
            delta = {fld.vec_sub(a, b) for a in is_i for b in is_i}
        block = lmuc.block(i, i)
        for a in range(len(part)):
            for b in range(a + 1, len(part)):
                x1, x2 = part[a], part[b]
                d = apply_block(fld.vec_sub(x1, x2), lmuc.s[i], code.m, block)
                if delta is not None:
                    collide = d in delta
                else:
                    shifted = {fld.vec_add(d, z) for z in is_i}
                    collide = not shifted.isdisjoint(is_i)
                if collide:
                    f1 = fan_out(lmuc, code, i, x1)
                    f2 = fan_out(lmuc, code, i, x2)
                    common = min(f1 & f2)
                    return False, AmbiguityWitness(i + 1, x1, x2, common)
    return True, None


def _linear_unambiguous_at(lmuc: Lmuc, code: MCode, i: int) -> bool:
    """Rank test for linear parts: C_i is unambiguous at T_i iff the images
    of a basis of C_i under F_{i,i}, stacked on a basis of IS_i(C), are
    independent (the quotient map loses nothing)."""
    fld = lmuc.field
    m = code.m
    basis_i = gf_span(list(code.parts[i]), fld)
    if not basis_i:
        return True
    is_gens = [
        apply_block(w, lmuc.s[j], m, lmuc.block(j, i))
        for j in range(lmuc.n)
        if j != i
        for w in gf_span(list(code.parts[j]), fld)
    ]
    is_basis = gf_span(is_gens, fld)
    images = [apply_block(w, lmuc.s[i], m, lmuc.block(i, i)) for w in basis_i]
    stacked = gf_span(images + is_basis, fld)
    return len(stacked) == len(basis_i) + len(is_basis)


def is_unambiguous_bruteforce(lmuc: Lmuc, code: MCode) -> bool:
    """Definition verbatim: pairwise disjoint fan-outs. Oracle only."""
    for i in range(lmuc.n):
        part = sorted(code.parts[i])
        fans = [fan_out_direct(lmuc, code, i, x) for x in part]
        for a in range(len(part)):
            for b in range(a + 1, len(part)):
                if fans[a] & fans[b]:
                    return False
    return True


def decode(lmuc: Lmuc, code: MCode, i: int, y: tuple[int, ...]) -> Codeword:
    """The unique x in C_i with y in Fan_i(x, C)."""
    ok, witness = is_unambiguous(lmuc, code)
    if not ok:
        raise ValueError(f"code is ambiguous (witness at pair {witness.i})")
    for x in sorted(code.parts[i]):
        if y in fan_out(lmuc, code, i, x):
            return x
    raise ValueError("received word lies outside the fan-out of the code")


def combine(code_a: MCode, code_b: MCode) -> MCode:
    """Time sharing: shot-wise concatenation into an (m+m')-code.

    Cardinalities multiply; if both inputs are unambiguous so is the result.
    """
    if len(code_a.parts) != len(code_b.parts):
        raise ValueError("codes have different numbers of parts")
    ma, mb = code_a.m, code_b.m
    parts = []
    for pa, pb in zip(code_a.parts, code_b.parts):
        rows = len(pa[0]) // ma
        if rows != len(pb[0]) // mb:
            raise ValueError("part shapes do not match")
        merged = set()
        for a in pa:
            for b in pb:
                w = []
                for r in range(rows):
                    w.extend(a[r * ma : (r + 1) * ma])
                    w.extend(b[r * mb : (r + 1) * mb])
                merged.add(tuple(w))
        parts.append(tuple(sorted(merged)))
    return MCode(ma + mb, tuple(parts), linear=code_a.linear and code_b.linear)


def all_codewords(s_i: int, m: int, fld: FieldSpec, bound: int = DEFAULT_ENUM_BOUND):
    """Every s_i x m array over GF(q), flat, in lexicographic order."""
    total = fld.q ** (s_i * m)
    if total > bound:
        from .gf import EnumerationBoundError

        raise EnumerationBoundError(total, bound)
    return list(itertools.product(fld.elements(), repeat=s_i * m))


def code_rate_point(code: MCode) -> RatePoint:
    return RatePoint(code.m, code.cardinalities)


def total_codewords(code: MCode) -> int:
    return prod(code.cardinalities)
