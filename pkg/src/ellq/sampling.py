"""Admissible random points and sampled comparison of expressions."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .elliptic import EllipticParams, lattice_distance, residual, sample_domain
from .errors import DegenerateSamplingError, NearPoleError
from .expr import AffineForm, Expr, evaluate, pole_divisors, variables

OVERSAMPLING = 10


def divisors_of(exprs: Iterable[Expr]) -> list[AffineForm]:
    out: set[AffineForm] = set()
    for e in exprs:
        out |= pole_divisors(e)
    return sorted(out, key=lambda f: repr(f))


def admissible_points(names: Sequence[str], params: EllipticParams, rng: np.random.Generator,
                      count: int | None = None, divisors: Iterable[AffineForm] = (),
                      exprs: Sequence[Expr] = (), fixed: dict | None = None,
                      constrain=None) -> dict:
    """Draw ``count`` points uniform in the fundamental domain per coordinate.

    A point is rejected when any divisor form lies within ``pole_margin`` of
    the lattice, or when evaluating one of ``exprs`` hits a near-zero
    denominator.  ``fixed`` pins some coordinates to given scalars and
    ``constrain`` (a function of the point dict) may rewrite coordinates, for
    example to impose a linear relation among the ``u``.  Gives up
    after drawing ``10 * count`` candidates.
    """
    count = params.sample_count if count is None else count
    divisors = list(divisors) + divisors_of(exprs)
    names = list(names)
    fixed = dict(fixed or {})
    got: dict[str, list] = {n: [] for n in names}
    have = 0
    drawn = 0
    budget = OVERSAMPLING * count
    while have < count:
        if drawn >= budget:
            raise DegenerateSamplingError(
                f"only {have} of {count} admissible points after {drawn} draws")
        batch = min(max(2 * (count - have), 8), budget - drawn)
        drawn += batch
        pts = {n: sample_domain(rng, batch, params.eta) for n in names}
        for k, v in fixed.items():
            pts[k] = np.full(batch, v, dtype=complex)
        if constrain is not None:
            pts = constrain(pts)
        ok = np.ones(batch, dtype=bool)
        for d in divisors:
            ok &= lattice_distance(d.evaluate(pts, params), params.eta) >= params.pole_margin
        keep = {n: pts[n][ok] for n in pts}
        if exprs and ok.any():
            keep = _drop_near_poles(exprs, keep, params)
        m = len(next(iter(keep.values()))) if keep else 0
        take = min(m, count - have)
        for n in names:
            got[n].extend(keep[n][:take])
        have += take
    out = {n: np.array(v, dtype=complex) for n, v in got.items()}
    for k, v in fixed.items():
        out[k] = np.full(count, v, dtype=complex)
    return out


def _drop_near_poles(exprs, pts, params):
    while True:
        size = len(next(iter(pts.values())))
        if size == 0:
            return pts
        try:
            for e in exprs:
                evaluate(e, pts, params)
            return pts
        except NearPoleError as err:
            bad = np.zeros(size, dtype=bool)
            if err.indices is not None and len(err.indices):
                bad[np.asarray(err.indices)] = True
            else:
                bad[:] = True
            pts = {n: v[~bad] for n, v in pts.items()}


def free_names(exprs: Iterable[Expr]) -> list[str]:
    out: set[str] = set()
    for e in exprs:
        out |= variables(e)
    from .expr import name_key
    return sorted(out, key=name_key)


def compare(a: Expr, b: Expr, params: EllipticParams, rng: np.random.Generator,
            count: int | None = None, names: Sequence[str] | None = None) -> tuple[float, int]:
    """Max normalized residual between ``a`` and ``b`` at admissible points."""
    names = free_names([a, b]) if names is None else list(names)
    pts = admissible_points(names, params, rng, count, exprs=[a, b])
    va = np.broadcast_to(evaluate(a, pts, params), (len(pts[names[0]]),) if names else ())
    vb = np.broadcast_to(evaluate(b, pts, params), va.shape)
    return float(np.max(residual(va, vb))), int(va.size)


def u_sum_zero(h: int):
    """A ``constrain`` hook imposing ``u_1 + ... + u_h = 0``."""
    last = f"u_{h}"
    others = [f"u_{i}" for i in range(1, h)]

    def apply(pts: dict) -> dict:
        if last not in pts:
            return pts
        out = dict(pts)
        out[last] = -sum(pts[k] for k in others)
        return out

    return apply
