"""Exact arithmetic in GF(p^k) and the matrix algebra built on it.

Field elements are plain ints: the element sum(c_i * X^i) is encoded as
sum(c_i * p^i), so for k=1 arithmetic coincides with integers mod p.
Vectors are row tuples and act on matrices from the left (x @ M).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Iterator, Sequence

# Largest space any exhaustive enumeration is allowed to walk.
DEFAULT_ENUM_BOUND = 2**20

# Largest field order canonical_field will construct.
MAX_FIELD_ORDER = 2**20


class EnumerationBoundError(ValueError):
    """An exhaustive enumeration would exceed the configured bound."""

    def __init__(self, required: int, allowed: int):
        super().__init__(
            f"enumeration of {required} elements exceeds the bound of {allowed}"
        )
        self.required = required
        self.allowed = allowed


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    # m is monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        lead = a[-1]
        shift = len(a) - 1 - dm
        if lead:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
    return a


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=d):
            divisor = list(coeffs) + [1]
            if _poly_mod(list(poly), divisor, p) == [0]:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) with its canonical modulus polynomial (little-endian coeffs)."""

    p: int
    k: int
    modulus: tuple[int, ...] = field(compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q

    # -- element codec -------------------------------------------------

    def _decode(self, a: int) -> list[int]:
        coeffs = []
        for _ in range(self.k):
            coeffs.append(a % self.p)
            a //= self.p
        return coeffs

    def _encode(self, coeffs: Sequence[int]) -> int:
        val = 0
        for c in reversed(coeffs):
            val = val * self.p + c
        return val

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")
        return a

    # -- arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        ca, cb = self._decode(a), self._decode(b)
        return self._encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._encode([(-c) % self.p for c in self._decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        prod_ = _poly_mul_mod_p(self._decode(a), self._decode(b), self.p)
        red = _poly_mod(prod_, self.modulus, self.p)
        red += [0] * (self.k - len(red))
        return self._encode(red)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero in a finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        # a^(q-2) by square-and-multiply
        result, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self) -> range:
        return range(self.q)

    # -- vector helpers ------------------------------------------------

    def vec_add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.add(a, b) for a, b in zip(x, y, strict=True))

    def vec_sub(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.sub(a, b) for a, b in zip(x, y, strict=True))

    def vec_scale(self, c: int, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.mul(c, a) for a in x)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k}


@lru_cache(maxsize=None)
def canonical_field(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the lexicographically smallest irreducible monic modulus.

    Modulus candidates X^k + sum(c_i X^i) are compared by the base-p integer
    formed by (c_0, ..., c_{k-1}), so the result is deterministic across
    runs and platforms.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if k < 1:
        raise ValueError(f"k={k} must be >= 1")
    if p**k > MAX_FIELD_ORDER:
        raise ValueError(f"q=p^k={p**k} exceeds MAX_FIELD_ORDER={MAX_FIELD_ORDER}")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in range(p**k):
        coeffs = []
        v = low
        for _ in range(k):
            coeffs.append(v % p)
            v //= p
        candidate = tuple(coeffs) + (1,)
        if _is_irreducible(candidate, p):
            return FieldSpec(p, k, candidate)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def field_from_json(obj: dict) -> FieldSpec:
    return canonical_field(int(obj["p"]), int(obj["k"]))


def field_from_order(q: int) -> FieldSpec:
    """The canonical field of prime-power order q."""
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n != 1:
                break
            return canonical_field(p, k)
    raise ValueError(f"{q} is not a prime power")


# ----------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: tuple[int, ...]
    field: FieldSpec

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        for e in self.entries:
            self.field.check(e)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> tuple[int, ...]:
        return self.entries[r * self.cols : (r + 1) * self.cols]

    def row_list(self) -> list[tuple[int, ...]]:
        return [self.row(r) for r in range(self.rows)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Mat":
        entries = tuple(self[r, c] for r in row_idx for c in col_idx)
        return Mat(len(row_idx), len(col_idx), entries, self.field)

    def transpose(self) -> "Mat":
        entries = tuple(
            self[r, c] for c in range(self.cols) for r in range(self.rows)
        )
        return Mat(self.cols, self.rows, entries, self.field)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": list(self.entries)}


def mat_from_rows(rows: Sequence[Sequence[int]], fld: FieldSpec, cols: int | None = None) -> Mat:
    if rows:
        cols = len(rows[0])
    elif cols is None:
        cols = 0
    entries = tuple(e for row in rows for e in row)
    return Mat(len(rows), cols, entries, fld)


def mat_from_json(obj: dict, fld: FieldSpec) -> Mat:
    return Mat(int(obj["rows"]), int(obj["cols"]), tuple(int(e) for e in obj["entries"]), fld)


def identity(n: int, fld: FieldSpec) -> Mat:
    return Mat(n, n, tuple(1 if r == c else 0 for r in range(n) for c in range(n)), fld)


def zeros(rows: int, cols: int, fld: FieldSpec) -> Mat:
    return Mat(rows, cols, (0,) * (rows * cols), fld)


def vec_mat_mul(x: Sequence[int], m: Mat) -> tuple[int, ...]:
    """Row vector times matrix: x @ M."""
    if len(x) != m.rows:
        raise ValueError(f"vector length {len(x)} != matrix rows {m.rows}")
    fld = m.field
    out = [0] * m.cols
    for r, xr in enumerate(x):
        if xr:
            row = m.row(r)
            for c in range(m.cols):
                if row[c]:
                    out[c] = fld.add(out[c], fld.mul(xr, row[c]))
    return tuple(out)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.cols != b.rows:
        raise ValueError("shape mismatch in matrix product")
    rows = [vec_mat_mul(a.row(r), b) for r in range(a.rows)]
    return mat_from_rows(rows, a.field, cols=b.cols)


def _rref(rows: list[list[int]], cols: int, fld: FieldSpec) -> tuple[list[list[int]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = fld.inv(rows[r][c])
        rows[r] = [fld.mul(inv, e) for e in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [fld.sub(e, fld.mul(factor, f)) for e, f in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def mat_rank(m: Mat) -> int:
    rows = [list(m.row(r)) for r in range(m.rows)]
    _, pivots = _rref(rows, m.cols, m.field)
    return len(pivots)


def mat_kernel_basis(m: Mat) -> list[tuple[int, ...]]:
    """Basis of the left null space {x : x @ M = 0}, in echelon form."""
    fld = m.field
    mt = m.transpose()  # left kernel of M = right kernel of M^T, i.e. x with M^T x^T = 0
    rows = [list(mt.row(r)) for r in range(mt.rows)]
    rows, pivots = _rref(rows, mt.cols, fld)
    pivot_set = set(pivots)
    free = [c for c in range(mt.cols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * mt.cols
        vec[f] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = fld.neg(rows[r][f])
        basis.append(tuple(vec))
    return span(basis, fld)


def span(vectors: Sequence[Sequence[int]], fld: FieldSpec) -> list[tuple[int, ...]]:
    """Echelon basis of the row span; empty list for the zero space."""
    if not vectors:
        return []
    cols = len(vectors[0])
    rows = [list(v) for v in vectors]
    rows, pivots = _rref(rows, cols, fld)
    return [tuple(rows[i]) for i in range(len(pivots))]


def span_elements(
    vectors: Sequence[Sequence[int]],
    fld: FieldSpec,
    length: int | None = None,
    bound: int = DEFAULT_ENUM_BOUND,
) -> set[tuple[int, ...]]:
    """All q^dim elements of the span. Zero-dim span of known length gives {0}."""
    basis = span(vectors, fld)
    if not basis:
        if length is None and vectors:
            length = len(vectors[0])
        if length is None:
            raise ValueError("length required for the span of no vectors")
        return {(0,) * length}
    size = fld.q ** len(basis)
    if size > bound:
        raise EnumerationBoundError(size, bound)
    out = set()
    for coeffs in itertools.product(fld.elements(), repeat=len(basis)):
        v = (0,) * len(basis[0])
        for c, b in zip(coeffs, basis):
            if c:
                v = fld.vec_add(v, fld.vec_scale(c, b))
        out.add(v)
    return out


def gaussian_binomial(d: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of GF(q)^d (product formula)."""
    if r < 0 or r > d:
        return 0
    num = prod(q**d - q**i for i in range(r))
    den = prod(q**r - q**i for i in range(r))
    return num // den


def enumerate_subspaces(
    ambient_dim: int,
    dim: int,
    fld: FieldSpec,
    bound: int = DEFAULT_ENUM_BOUND,
) -> Iterator[list[tuple[int, ...]]]:
    """Yield every dim-dimensional subspace of GF(q)^ambient_dim exactly once.

    Each subspace appears as its unique reduced-row-echelon basis. Pivot
    columns are chosen in lexicographic order and free entries counted up
    in base q, so the stream order is canonical.
    """
    if not 0 <= dim <= ambient_dim:
        raise ValueError(f"need 0 <= dim <= ambient_dim, got {dim}, {ambient_dim}")
    if fld.q**ambient_dim > bound:
        raise EnumerationBoundError(fld.q**ambient_dim, bound)
    if dim == 0:
        yield []
        return
    q_elems = list(fld.elements())
    for pivots in itertools.combinations(range(ambient_dim), dim):
        pivot_set = set(pivots)
        # free slot (r, c): column c right of pivot r and not itself a pivot
        free_slots = [
            (r, c)
            for r in range(dim)
            for c in range(pivots[r] + 1, ambient_dim)
            if c not in pivot_set
        ]
        for values in itertools.product(q_elems, repeat=len(free_slots)):
            basis = [[0] * ambient_dim for _ in range(dim)]
            for r in range(dim):
                basis[r][pivots[r]] = 1
            for (r, c), v in zip(free_slots, values):
                basis[r][c] = v
            yield [tuple(row) for row in basis]
