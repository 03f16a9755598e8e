from __future__ import annotations

import random

import pytest

from lmuc.channel import Lmuc, MCode, all_codewords, make_mcode
from lmuc.gf import FieldSpec, canonical_field, mat_from_rows


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)


def random_lmuc(
    rng: random.Random,
    fld: FieldSpec,
    n: int,
    s_max: int = 3,
    t_max: int = 3,
    nonzero_diagonal: bool = False,
) -> Lmuc:
    s = tuple(rng.randint(1, s_max) for _ in range(n))
    t = tuple(rng.randint(1, t_max) for _ in range(n))
    while True:
        rows = [
            [rng.randrange(fld.q) for _ in range(sum(t))] for _ in range(sum(s))
        ]
        lm = Lmuc(fld, n, s, t, mat_from_rows(rows, fld))
        if not nonzero_diagonal:
            return lm
        if all(
            any(e != 0 for e in lm.block(i, i).entries) for i in range(n)
        ):
            return lm


def random_code(rng: random.Random, lmuc: Lmuc, m: int, max_size: int = 8) -> MCode:
    parts = []
    for i in range(lmuc.n):
        space = all_codewords(lmuc.s[i], m, lmuc.field)
        size = rng.randint(1, min(max_size, len(space)))
        parts.append(rng.sample(space, size))
    return make_mcode(m, parts)


def small_field(rng: random.Random, q_max: int = 4) -> FieldSpec:
    choices = [(2, 1), (3, 1), (2, 2)]
    if q_max >= 5:
        choices.append((5, 1))
    p, k = rng.choice([c for c in choices if c[0] ** c[1] <= q_max])
    return canonical_field(p, k)
