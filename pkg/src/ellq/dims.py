"""Dimensions of the graded pieces of Q over Q_0, measured and predicted.

Measurement works on the fibre over a random generic ``u``.  With
``D = prod theta(x_a - x_b)`` over coupled pairs (different colours, nonzero
scalar product), every ``f`` in ``Q_l`` has ``h = f * D`` holomorphic, and
``h`` is a theta function of the vector ``x`` whose multiplier matrix is

    M = diag(n_{colour(a)}) + (graph Laplacian of the coupled pairs).

When ``M`` is positive definite the space of such ``h`` has dimension
``det M``.  It is spanned by products ``prod_k theta(l_k . x - s_k)`` with
``sum_k l_k l_k^T = M`` and constants ``s_k`` chosen so the multipliers
match; symmetrizing them and imposing chain vanishing gives ``Q_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product as iproduct
from typing import Sequence

import numpy as np

from .elliptic import EllipticParams, numerical_rank
from .errors import DeskScaleError, InvalidParameterError, UnsupportedError
from .expr import AffineForm, Const, Expr, Theta, add, evaluate, mul, ratio, substitute
from .report import CheckResult, exact_check
from .roots import Grade, RootData, WeightForm, u_name, u_names, x_name, x_names
from .sampling import admissible_points
from .star import GradedElement, chain_subspaces

ETA = AffineForm.var("eta")
TAU = AffineForm.var("tau")
RANK_REL = 1e-8
MAX_VARIABLES = 8


# ---------------------------------------------------------------------------
# multiplier data


def coupled_pairs(grade: Grade, roots: RootData) -> list[tuple[str, str]]:
    xs = x_names(grade)
    colour = {v: int(v.split("_")[2]) - 1 for v in xs}
    return [(a, b) for k, a in enumerate(xs) for b in xs[k + 1:]
            if roots.coupled(colour[a], colour[b])]


def multiplier_matrix(n: WeightForm, grade: Grade, roots: RootData) -> np.ndarray:
    xs = x_names(grade)
    idx = {v: k for k, v in enumerate(xs)}
    M = np.diag([float(n[int(v.split("_")[2]) - 1]) for v in xs])
    for a, b in coupled_pairs(grade, roots):
        i, j = idx[a], idx[b]
        M[i, i] += 1
        M[j, j] += 1
        M[i, j] -= 1
        M[j, i] -= 1
    return M


def _psd(R: np.ndarray) -> bool:
    return R.size == 0 or np.min(np.linalg.eigvalsh(R)) > -1e-9


def square_decompositions(M: np.ndarray, limit: int = 3) -> list[list[tuple[int, ...]]]:
    """Lists of vectors in {-1,0,1}^N with ``sum l l^T = M`` (depth-first search)."""
    N = M.shape[0]
    M = np.rint(M).astype(int)
    found: list[list[tuple[int, ...]]] = []
    seen: set = set()
    options = [v for v in iproduct((-1, 0, 1), repeat=N) if any(v)]

    def rec(R, chosen):
        if len(found) >= limit:
            return
        if not R.any():
            key = tuple(sorted(chosen))
            if key not in seen:
                seen.add(key)
                found.append(list(chosen))
            return
        if not np.any(np.diag(R) > 0):
            return
        # the first index still carrying weight must be covered by the next vector
        a = int(np.argmax(np.diag(R) > 0))
        for v in options:
            if v[a] != 1 or any(v[b] for b in range(a)):
                continue
            vv = np.array(v)
            R2 = R - np.outer(vv, vv)
            if np.any(np.diag(R2) < 0) or not _psd(R2):
                continue
            rec(R2, chosen + [v])
            if len(found) >= limit:
                return

    rec(M, [])
    return found


def _natural_decomposition(M: np.ndarray, pairs_idx) -> list[tuple[int, ...]] | None:
    N = M.shape[0]
    vecs = []
    R = np.rint(M).astype(int)
    for i, j in pairs_idx:
        v = [0] * N
        v[i], v[j] = 1, -1
        vecs.append(tuple(v))
        R[i, i] -= 1
        R[j, j] -= 1
        R[i, j] += 1
        R[j, i] += 1
    if np.any(R - np.diag(np.diag(R))) or np.any(np.diag(R) < 0):
        return None
    for a in range(N):
        vecs += [tuple(1 if b == a else 0 for b in range(N))] * int(R[a, a])
    return vecs


def _multiplier_constants(vectors, shifts, N):
    """``C_a`` for ``prod theta(l_k . x - s_k)``: ``sum_k l_ka (1/2 - s_k + (l_ka - 1) eta / 2)``."""
    out = [AffineForm() for _ in range(N)]
    for v, s in zip(vectors, shifts):
        for a, la in enumerate(v):
            if la:
                out[a] = out[a] + (AffineForm.constant(0.5) - s + ETA * ((la - 1) / 2)) * la
    return out


# ---------------------------------------------------------------------------
# ansatz


@dataclass
class AnsatzSpace:
    """Symmetrized candidates, the constraint nullspace and the resulting basis.

    ``elements`` are valid on the fibre ``u = u_point``; when the chain
    conditions are vacuous they are elements of ``Q_l`` for every ``u``.
    """

    grade: Grade
    n: WeightForm
    candidates: list
    elements: list
    u_point: dict
    det: int
    span_rank: int
    dimension: int
    reason: str = ""
    singular_values: list = field(default_factory=list)


def _linear(vec, xs) -> AffineForm:
    return AffineForm({x: float(c) for x, c in zip(xs, vec) if c})


def ansatz_space(n: WeightForm, l: Grade, roots: RootData, params: EllipticParams,
                 rng: np.random.Generator | None = None, oversample: int = 2) -> AnsatzSpace:
    l = Grade(l)
    l.check(roots)
    n.check(roots)
    rng = np.random.default_rng(0) if rng is None else rng
    xs = x_names(l)
    us = u_names(roots.rank)
    u_point = {u: complex(v) for u, v in zip(us, rng.random(len(us)) + 1j * rng.random(len(us)))}
    if not xs:
        one = GradedElement(l, Const(1.0), "1")
        return AnsatzSpace(l, n, [one], [one], u_point, 1, 1, 1)
    if len(xs) > MAX_VARIABLES:
        raise DeskScaleError(f"{len(xs)} variables exceed the desk-scale limit {MAX_VARIABLES}")
    M = multiplier_matrix(n, l, roots)
    eig = np.linalg.eigvalsh(M)
    if eig[0] <= 1e-9:
        return AnsatzSpace(l, n, [], [], u_point, 0, 0, 0,
                           reason="multiplier matrix not positive definite: no sections for generic u")
    det = int(round(np.linalg.det(M)))
    pairs = coupled_pairs(l, roots)
    idx = {v: k for k, v in enumerate(xs)}
    den_vecs = [tuple(1 if k == idx[a] else -1 if k == idx[b] else 0 for k in range(len(xs)))
                for a, b in pairs]
    den_consts = _multiplier_constants(den_vecs, [AffineForm()] * len(den_vecs), len(xs))
    colour = [int(v.split("_")[2]) - 1 for v in xs]
    target = [AffineForm.var(u_name(c + 1)) - TAU * roots.pairing(l, c) + den_consts[a]
              for a, c in enumerate(colour)]
    decomps = []
    nat = _natural_decomposition(M, [(idx[a], idx[b]) for a, b in pairs])
    if nat is not None:
        decomps.append(nat)
    for d in square_decompositions(M, limit=3):
        if d not in decomps:
            decomps.append(d)
    if not decomps:
        raise UnsupportedError("no {-1,0,1} square decomposition of the multiplier matrix")
    Minv = np.linalg.inv(M)
    den = [Theta(_linear(v, xs)) for v in den_vecs]
    groups = [[x_name(a, i + 1) for a in range(1, l[i] + 1)] for i in range(roots.rank)]
    perms = _colour_permutations(groups)
    per_decomp = max(oversample * det // len(decomps) + 1, 2)
    raw = []
    for vecs in decomps:
        L = np.array(vecs, dtype=float).T  # N x K
        beta = _multiplier_constants(vecs, [AffineForm()] * len(vecs), len(xs))
        for _ in range(per_decomp):
            t = rng.random(len(vecs)) + 1j * rng.random(len(vecs))
            rhs = [beta[a] - target[a] - complex(L[a] @ t) for a in range(len(xs))]
            w = [sum((rhs[b] * Minv[a, b] for b in range(len(xs))), AffineForm())
                 for a in range(len(xs))]
            shifts = []
            for k, v in enumerate(vecs):
                s = AffineForm.constant(t[k])
                for a, la in enumerate(v):
                    if la:
                        s = s + w[a] * la
                shifts.append(s)
            num = [Theta(_linear(v, xs) - s) for v, s in zip(vecs, shifts)]
            raw.append(ratio(num, den))
    candidates = []
    for k, e in enumerate(raw):
        sym = add(*[substitute(e, p) for p in perms]) if len(perms) > 1 else e
        candidates.append(GradedElement(l, sym, f"cand{k}"))

    # evaluation on the fibre
    bodies = [c.body for c in candidates]
    npts = max(2 * len(candidates), 2 * det + 4)
    pts = admissible_points(xs + us, params, rng, npts, exprs=bodies, fixed=u_point)
    E = np.column_stack([np.broadcast_to(evaluate(b, pts, params), (npts,)) for b in bodies])
    scale = np.max(np.abs(E), axis=0)
    scale[scale == 0] = 1.0
    E = E / scale
    U, S, Vt = np.linalg.svd(E, full_matrices=False)
    r = int(np.sum(S > RANK_REL * S[0])) if S.size and S[0] > 0 else 0
    if r == 0:
        return AnsatzSpace(l, n, candidates, [], u_point, det, 0, 0, reason="candidates vanish")
    B = Vt[:r].conj().T / S[:r]  # coefficient vectors of an orthonormal basis
    chains = chain_subspaces(l, roots)
    coeffs = B
    if chains:
        rows = []
        for basevar, offs in chains:
            others = [k for k in xs if k not in offs]
            cp = admissible_points(others + [basevar] + us, params, rng, max(r, 4),
                                   fixed=u_point)
            p = {k: cp[k] for k in others + us}
            for var, off in offs.items():
                p[var] = cp[basevar] + off * params.tau
            C = np.column_stack([np.broadcast_to(evaluate(b, p, params), (len(cp[basevar]),))
                                 for b in bodies]) / scale
            rows.append(C @ B * math.sqrt(npts))
        C = np.vstack(rows)
        _, Sc, Vc = np.linalg.svd(C)
        kc = int(np.sum(Sc > 1e-6 * max(1.0, Sc[0] if Sc.size else 0.0)))
        null = Vc[kc:].conj().T
        coeffs = B @ null
    elements = []
    for j in range(coeffs.shape[1]):
        terms = [mul(Const(complex(c / scale[k])), candidates[k].body)
                 for k, c in enumerate(coeffs[:, j]) if abs(c) > 1e-14 * np.max(np.abs(coeffs[:, j]))]
        elements.append(GradedElement(l, add(*terms), f"b{j}"))
    return AnsatzSpace(l, n, candidates, elements, u_point, det, r, coeffs.shape[1],
                       singular_values=[float(s) for s in S[: r + 2]])


def _colour_permutations(groups):
    per = []
    for g in groups:
        per.append([dict(zip(g, p)) for p in permutations(g)] if len(g) > 1 else [{}])
    out = []
    for combo in iproduct(*per):
        m = {}
        for d in combo:
            m.update({k: AffineForm.var(v) for k, v in d.items() if k != v})
        out.append(m)
    return out


def numeric_dim(n: WeightForm, l: Grade, roots: RootData, params: EllipticParams,
                rng: np.random.Generator | None = None) -> int:
    """Rank of the evaluation matrix of the ansatz basis on its fibre."""
    rng = np.random.default_rng(0) if rng is None else rng
    space = ansatz_space(n, l, roots, params, rng)
    if not space.elements:
        return 0
    xs = x_names(space.grade)
    if not xs:
        return 1
    bodies = [e.body for e in space.elements]
    npts = 2 * len(bodies) + 4
    pts = admissible_points(xs + u_names(roots.rank), params, rng, npts, exprs=bodies,
                            fixed=space.u_point)
    E = np.column_stack([np.broadcast_to(evaluate(b, pts, params), (npts,)) for b in bodies])
    s = np.max(np.abs(E), axis=0)
    s[s == 0] = 1
    return numerical_rank(E / s, RANK_REL)


# ---------------------------------------------------------------------------
# Hilbert series


def _series_mul(a: dict, b: dict, cutoff) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if all(x <= c for x, c in zip(k, cutoff)):
                out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _power_factor(root, exponent: int, cutoff) -> dict:
    """Truncated ``(1 - w^root)^(-exponent)``."""
    zero = tuple(0 for _ in cutoff)
    out = {zero: 1}
    if exponent == 0:
        return out
    k = 1
    while True:
        mono = tuple(k * r for r in root)
        if any(m > c for m, c in zip(mono, cutoff)):
            break
        if exponent > 0:
            coef = math.comb(exponent + k - 1, k)
        else:
            coef = (-1) ** k * math.comb(-exponent, k)
        if coef:
            out[mono] = coef
        k += 1
    return out


def hilbert_coeffs(roots: RootData, n: WeightForm, cutoff: Sequence[int]) -> dict:
    """Coefficients of the Hilbert series up to ``cutoff`` (componentwise).

    Finite type A with dominant ``n``: ``prod_{g > 0} (1 - w^g)^(-n(g))``.
    Affine sl_h: the same over positive roots with multiplicities, times
    ``prod_{a >= mu} (1 - w^{a delta})^(-a n(delta))``, ``delta = d_1+...+d_h``,
    ``mu = 2`` for ``h = 2`` and 1 otherwise.
    """
    n.check(roots)
    cutoff = tuple(int(c) for c in cutoff)
    if len(cutoff) != roots.rank:
        raise InvalidParameterError("cutoff rank mismatch")
    if not roots.affine and any(v < 0 for v in n):
        raise UnsupportedError("the product formula is stated for dominant n only")
    series = {tuple(0 for _ in cutoff): 1}
    for root, mult in roots.positive_roots(cutoff if roots.affine else None):
        e = n(root) * mult
        if e:
            series = _series_mul(series, _power_factor(root, e, cutoff), cutoff)
    if roots.affine:
        h = roots.rank
        mu = 2 if h == 2 else 1
        nd = n((1,) * h)
        a = mu
        while a <= min(cutoff):
            series = _series_mul(series, _power_factor((a,) * h, a * nd, cutoff), cutoff)
            a += 1
    return {Grade(k): v for k, v in series.items()}


def hilbert_coefficient(roots: RootData, n: WeightForm, grade: Sequence[int]) -> int:
    return hilbert_coeffs(roots, n, grade).get(Grade(grade), 0)


def dim_vs_hilbert(roots: RootData, n: WeightForm, grades: Sequence[Sequence[int]],
                   params: EllipticParams, rng=None) -> list[CheckResult]:
    rng = np.random.default_rng(0) if rng is None else rng
    out = []
    for g in grades:
        g = Grade(g)
        measured = numeric_dim(n, g, roots, params, rng)
        predicted = hilbert_coefficient(roots, n, g)
        out.append(exact_check(f"dim[{','.join(map(str, g))}]", measured == predicted,
                               anchor="Hilbert series of Q for dominant n",
                               measured=measured, predicted=predicted))
    return out
