"""Diagonal Hilbert data for ``A_h`` with ``n = (1, 0, ..., 0, m)``: the
dimensions of ``Q_{a(d_1+...+d_h)}`` match ``(1 - w)^{-(hm+1)}``."""

from __future__ import annotations

from math import comb

import numpy as np

from ..dims import numeric_dim
from ..elliptic import EllipticParams
from ..errors import InvalidParameterError
from ..report import CheckResult, exact_check
from ..roots import Grade, RootData, WeightForm


def sklyanin_weight(h: int, m: int) -> WeightForm:
    if h == 1:
        return WeightForm([m + 1])
    return WeightForm([1] + [0] * (h - 2) + [m])


def sklyanin_hilbert_check(h: int, m: int, params: EllipticParams, rng=None,
                           alphas=(1, 2)) -> list[CheckResult]:
    """``dim Q_{a(d_1+...+d_h)} = binomial(hm + a, a)`` for each ``a`` in ``alphas``."""
    if h < 1 or m < 1:
        raise InvalidParameterError(f"need h >= 1 and m >= 1 (got h={h}, m={m})")
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.type_A(h)
    n = sklyanin_weight(h, m)
    out = []
    for a in alphas:
        d = numeric_dim(n, Grade([a] * h), roots, params, rng)
        expected = comb(h * m + a, a)
        out.append(exact_check(f"sklyanin.dim.alpha{a}", d == expected,
                               anchor="diagonal dimensions follow (1 - w)^-(hm+1)",
                               measured=d, expected=expected))
    return out
