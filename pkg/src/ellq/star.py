"""The graded algebra of symmetric functions with the theta-kernel star product,
and numerical membership tests for its subalgebra Q.

An element of grade ``l`` is a function of ``x_{a,i}`` (``1 <= a <= l_i``)
and ``u_1..u_h``, symmetric within each colour group ``i``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .elliptic import EllipticParams, lattice_distance, residual
from .errors import RankMismatchError
from .expr import (AffineForm, Expr, ONE, Theta, add, evaluate, mul, pole_divisors, ratio,
                   substitute, variables)
from .report import CheckResult
from .roots import Grade, RootData, WeightForm, u_name, u_names, x_name, x_names
from .sampling import admissible_points, divisors_of

TAU = AffineForm.var("tau")
CHAIN_JITTER = 0.05


@dataclass(frozen=True)
class GradedElement:
    grade: Grade
    body: Expr
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.grade, Grade):
            object.__setattr__(self, "grade", Grade(self.grade))

    @property
    def rank(self) -> int:
        return self.grade.rank

    def context(self) -> list[str]:
        return x_names(self.grade) + u_names(self.rank)

    def check_context(self) -> None:
        extra = variables(self.body) - set(self.context())
        if extra:
            raise RankMismatchError(f"body uses undeclared variables {sorted(extra)}")

    def map_body(self, fn) -> "GradedElement":
        return GradedElement(self.grade, fn(self.body), self.label)

    def __str__(self):
        return f"[{self.grade}] {self.body}"


def _pair_kernel(a: str, b: str, s: float) -> tuple[Expr, Expr]:
    diff = AffineForm({a: 1, b: -1})
    return Theta(diff - TAU * s), Theta(diff)


def colour_shuffles(left: Sequence[int], right: Sequence[int]):
    """Yield per-colour index splits ``(S_i, C_i)`` of ``1..l_i + l'_i``."""
    per_colour = []
    for a, b in zip(left, right):
        idx = list(range(1, a + b + 1))
        per_colour.append([(s, tuple(k for k in idx if k not in s)) for s in combinations(idx, a)])

    def rec(i):
        if i == len(per_colour):
            yield ()
            return
        for choice in per_colour[i]:
            for rest in rec(i + 1):
                yield (choice,) + rest

    yield from rec(0)


def star(f: GradedElement, g: GradedElement, roots: RootData,
         params: EllipticParams | None = None) -> GradedElement:
    """Star product: sum over colour-wise shuffles with prefactor 1.

    The second factor has ``u_i`` replaced by ``u_i - 2 (l, d_i) tau`` and each
    pair (first block, second block) contributes the kernel
    ``theta(x - x' - (d_i, d_j) tau) / theta(x - x')``; pairs with
    ``(d_i, d_j) = 0`` contribute 1.
    """
    f.grade.check(roots)
    g.grade.check(roots)
    h = roots.rank
    l, lp = f.grade, g.grade
    u_shift = {u_name(i + 1): AffineForm({u_name(i + 1): 1}) - TAU * (2 * roots.pairing(l, i))
               for i in range(h)}
    u_shift = {k: v for k, v in u_shift.items() if v != AffineForm.var(k)}
    terms = []
    for split in colour_shuffles(l, lp):
        fmap, gmap = {}, dict(u_shift)
        for i, (s, c) in enumerate(split):
            for a, k in enumerate(s, start=1):
                fmap[x_name(a, i + 1)] = x_name(k, i + 1)
            for b, k in enumerate(c, start=1):
                gmap[x_name(b, i + 1)] = x_name(k, i + 1)
        fmap = {k: v for k, v in fmap.items() if k != v}
        num, den = [], []
        for i in range(h):
            for j in range(h):
                gij = roots.gram[i][j]
                if gij == 0:
                    continue
                for a in split[i][0]:
                    for b in split[j][1]:
                        t, d = _pair_kernel(x_name(a, i + 1), x_name(b, j + 1), gij)
                        num.append(t)
                        den.append(d)
        parts = [substitute(f.body, fmap), substitute(g.body, gmap)]
        if num:
            parts.append(ratio(num, den))
        terms.append(mul(*[p for p in parts if p is not ONE]))
    return GradedElement(l + lp, add(*terms), label=_join(f.label, g.label, "*"))


def tau0_product(f: GradedElement, g: GradedElement, roots: RootData) -> GradedElement:
    """The commutative product at ``tau = 0``: plain shuffle symmetrization."""
    f.grade.check(roots)
    g.grade.check(roots)
    terms = []
    for split in colour_shuffles(f.grade, g.grade):
        fmap, gmap = {}, {}
        for i, (s, c) in enumerate(split):
            for a, k in enumerate(s, start=1):
                fmap[x_name(a, i + 1)] = x_name(k, i + 1)
            for b, k in enumerate(c, start=1):
                gmap[x_name(b, i + 1)] = x_name(k, i + 1)
        terms.append(mul(substitute(f.body, fmap), substitute(g.body, gmap)))
    return GradedElement(f.grade + g.grade, add(*terms), label=_join(f.label, g.label, "."))


def _join(a, b, op):
    return f"({a}{op}{b})" if a and b else ""


def grade_zero(body: Expr, rank: int, label: str = "") -> GradedElement:
    return GradedElement(Grade.zero(rank), body, label)


def embed(f: GradedElement, keep: Sequence[int], rank: int) -> GradedElement:
    """Rename colours of a subsystem element into the ambient system."""
    mapping = {}
    for i, c in enumerate(f.grade):
        for a in range(1, c + 1):
            mapping[x_name(a, i + 1)] = x_name(a, keep[i] + 1)
    for i in range(f.rank):
        mapping[u_name(i + 1)] = u_name(keep[i] + 1)
    counts = [0] * rank
    for i, c in enumerate(f.grade):
        counts[keep[i]] = c
    body = substitute(f.body, {k: AffineForm.var(v) for k, v in mapping.items() if k != v})
    return GradedElement(Grade(counts), body, f.label)


# ---------------------------------------------------------------------------
# sampled equality


def _element_points(elements, params, rng, count=None, extra=(), constrain=None):
    rank = elements[0].rank
    names = x_names(elements[0].grade) + u_names(rank)
    return admissible_points(names, params, rng, count, divisors=extra,
                             exprs=[e.body for e in elements], constrain=constrain)


def equal_numeric(a: GradedElement, b: GradedElement, params: EllipticParams,
                  rng: np.random.Generator | None = None, count: int | None = None,
                  name: str = "equal", constrain=None) -> CheckResult:
    if a.grade != b.grade:
        raise RankMismatchError(f"grades differ: {a.grade} vs {b.grade}")
    rng = np.random.default_rng(0) if rng is None else rng
    t0 = time.perf_counter()
    if a.body is b.body:
        return CheckResult(name, 0.0, params.tol, 0, wall_time=time.perf_counter() - t0)
    pts = _element_points([a, b], params, rng, count, constrain=constrain)
    n = len(next(iter(pts.values())))
    va = np.broadcast_to(evaluate(a.body, pts, params), (n,))
    vb = np.broadcast_to(evaluate(b.body, pts, params), (n,))
    return CheckResult(name, float(np.max(residual(va, vb))), params.tol, n,
                       wall_time=time.perf_counter() - t0)


def symmetry_residual(f: GradedElement, params: EllipticParams,
                      rng: np.random.Generator | None = None, count: int | None = None) -> float:
    """Max residual of ``f`` against its adjacent transpositions within colours."""
    rng = np.random.default_rng(0) if rng is None else rng
    swaps = []
    for i, c in enumerate(f.grade):
        for a in range(1, c):
            p, q = x_name(a, i + 1), x_name(a + 1, i + 1)
            swaps.append({p: AffineForm.var(q), q: AffineForm.var(p)})
    if not swaps:
        return 0.0
    pts = _element_points([f], params, rng, count)
    base = evaluate(f.body, pts, params)
    worst = 0.0
    for sw in swaps:
        other = {k: v for k, v in pts.items()}
        (p, q) = list(sw)
        other[p], other[q] = pts[q], pts[p]
        worst = max(worst, float(np.max(residual(evaluate(f.body, other, params), base))))
    return worst


# ---------------------------------------------------------------------------
# membership in Q


@dataclass
class MembershipReport:
    poles: float
    periodicity: float
    chains: float
    translation: float
    vacuous_chains: bool
    samples: int
    detail: dict

    @property
    def residuals(self) -> dict:
        return {"poles": self.poles, "periodicity": self.periodicity,
                "chains": self.chains, "translation": self.translation}

    @property
    def worst(self) -> float:
        return max(self.residuals.values())

    def checks(self, prefix: str, threshold: float) -> list[CheckResult]:
        anchors = {
            "poles": "simple poles only on coupled divisors",
            "periodicity": "quasi-periodicity in each x with m=n_i, c=u_i-(d_i,l)tau",
            "chains": "vanishing on the chain subspaces",
            "translation": "invariance under component translations",
        }
        out = []
        for k, v in self.residuals.items():
            det = {"vacuous": self.vacuous_chains} if k == "chains" else {}
            out.append(CheckResult(f"{prefix}.cond_{k}", v, threshold, self.samples,
                                   anchor=anchors[k], detail=det))
        return out


LAURENT_NODES = 64
LAURENT_RADIUS = 0.02


def laurent_coefficients(func, center: dict, var: str, coef: complex, params,
                         radius: float = LAURENT_RADIUS, nodes: int = LAURENT_NODES):
    """Laurent coefficients ``c_{-1}, c_{-2}, c_{-3}`` in the transverse variable.

    ``var`` moves on a circle so that the divisor value ``t`` runs over
    ``|t| = radius``.  Returns ``(c, max|f|)`` with ``c[k] = c_{-k}``.
    """
    phi = 2 * np.pi * np.arange(nodes) / nodes
    t = radius * np.exp(1j * phi)
    pts = {k: np.full(nodes, v, dtype=complex) for k, v in center.items()}
    pts[var] = center[var] + t / coef
    vals = func(pts)
    c = {k: complex(np.mean(vals * t ** k)) for k in (1, 2, 3)}
    return c, float(np.max(np.abs(vals)))


def _solve_on_divisor(form: AffineForm, pts: dict, var: str, params) -> complex:
    rest = form.evaluate({**pts, var: 0.0}, params)
    return -rest / form.coefficient(var)


def pole_order_residuals(f: GradedElement, allowed, params, rng, trials: int = 2,
                         max_order: int = 1, constrain=None) -> tuple[float, dict]:
    """Contour estimates of the principal part on each syntactic divisor.

    On ``allowed`` divisors the coefficient ``c_{-(max_order+1)}`` must vanish;
    elsewhere ``c_{-1}`` must vanish too (holomorphy).  Residuals are
    ``|c_{-k}| / r^k / (max|f| + 1)``.
    """
    divs = [d for d in pole_divisors(f.body) if d.variables() & set(x_names(f.grade))]
    names = x_names(f.grade) + u_names(f.rank)
    worst, detail = 0.0, {}

    def func(p):
        return np.broadcast_to(evaluate(f.body, p, params), (LAURENT_NODES,))

    for d in divs:
        var = next(n for n, _ in d.terms if n in names and n.startswith("x_"))
        order = max_order + 1 if d in allowed else 1
        for _ in range(trials):
            for _attempt in range(20):
                base = admissible_points(names, params, rng, 1, constrain=constrain,
                                         divisors=[x for x in divs if x != d])
                center = {k: complex(v[0]) for k, v in base.items()}
                center[var] = _solve_on_divisor(d, center, var, params)
                near = [lattice_distance(o.evaluate(center, params), params.eta)
                        for o in divs if o != d]
                if not near or min(near) > 3 * LAURENT_RADIUS:
                    break
            c, scale = laurent_coefficients(func, center, var, d.coefficient(var), params)
            r = abs(c[order]) / LAURENT_RADIUS ** order / (scale + 1.0)
            worst = max(worst, r)
            key = str(d)
            detail[key] = max(detail.get(key, 0.0), r)
    return worst, detail


def coupled_divisors(grade: Grade, roots: RootData) -> set[AffineForm]:
    out = set()
    for i in range(roots.rank):
        for j in range(roots.rank):
            if roots.coupled(i, j):
                for a in range(1, grade[i] + 1):
                    for b in range(1, grade[j] + 1):
                        form = AffineForm({x_name(a, i + 1): 1, x_name(b, j + 1): -1})
                        lead = form.terms[0][1]
                        out.add(form if (lead.real, lead.imag) >= (0, 0) else -form)
    return out


def chain_subspaces(grade: Grade, roots: RootData):
    """Parametrizations of the chain subspaces as ``(base_var, {var: offset})``.

    For ``a_ij < 0`` with ``k = 1 - a_ij`` distinct ``x_{a_s,i}`` and one
    ``x_{b,j}``: ``x_{b,j} = p``, ``x_{a_1,i} = p - (d_i,d_j) tau`` and
    ``x_{a_{s+1},i} = x_{a_s,i} - (d_i,d_i) tau``.  Offsets are multiples of tau.
    """
    out = []
    A = roots.cartan
    for i in range(roots.rank):
        for j in range(roots.rank):
            if i == j or A[i][j] >= 0:
                continue
            k = 1 - A[i][j]
            if grade[i] < k or grade[j] < 1:
                continue
            gii, gij = roots.gram[i][i], roots.gram[i][j]
            for alphas in permutations(range(1, grade[i] + 1), k):
                for b in range(1, grade[j] + 1):
                    offs = {x_name(b, j + 1): 0.0}
                    cur = -gij
                    for s, a in enumerate(alphas):
                        offs[x_name(a, i + 1)] = cur
                        cur -= gii
                    out.append((x_name(b, j + 1), offs))
    return out


def q_membership(f: GradedElement, n: WeightForm, roots: RootData, params: EllipticParams,
                 rng: np.random.Generator | None = None, count: int | None = None,
                 constrain=None) -> MembershipReport:
    """Residuals for the pole, periodicity, chain-vanishing and translation conditions.

    ``constrain`` is passed to the point sampler (see ``admissible_points``).
    """
    f.grade.check(roots)
    n.check(roots)
    rng = np.random.default_rng(0) if rng is None else rng
    count = params.sample_count if count is None else count
    eta, tau = params.eta, params.tau
    l = f.grade
    xs = x_names(l)
    names = xs + u_names(roots.rank)
    body = f.body

    def ev(p):
        return np.broadcast_to(evaluate(body, p, params), (len(p[names[0]]),))

    # 1. poles
    allowed = coupled_divisors(l, roots)
    r1, pole_detail = pole_order_residuals(f, allowed, params, rng, constrain=constrain)

    pts = admissible_points(names, params, rng, count, exprs=[body], constrain=constrain)
    base = ev(pts)

    # 2. periodicity in each x
    r2 = 0.0
    for i in range(roots.rank):
        c_shift = -roots.pairing(l, i) * tau
        for a in range(1, l[i] + 1):
            v = x_name(a, i + 1)
            p1 = dict(pts)
            p1[v] = pts[v] + 1
            r2 = max(r2, float(np.max(residual(ev(p1), base))))
            p2 = dict(pts)
            p2[v] = pts[v] + eta
            mult = np.exp(-2j * np.pi * (n[i] * pts[v] + pts[u_name(i + 1)] + c_shift))
            r2 = max(r2, float(np.max(residual(ev(p2), mult * base))))

    # 3. chains
    chains = chain_subspaces(l, roots)
    r3 = 0.0
    if chains:
        scale = float(np.median(np.abs(base))) + 1.0
        for basevar, offs in chains:
            others = [k for k in names if k not in offs]
            cp = admissible_points(others + [basevar], params, rng, max(count // 4, 5),
                                   constrain=constrain)
            p = {k: cp[k] for k in others}
            for var, off in offs.items():
                p[var] = cp[basevar] + off * tau
            ok = np.ones(len(cp[basevar]), dtype=bool)
            for d in divisors_of([body]):
                ok &= lattice_distance(d.evaluate(p, params), params.eta) >= params.pole_margin
            if not ok.any():
                continue
            p = {k: v[ok] for k, v in p.items()}
            # local size of f: the same point moved off the chain
            jit = dict(p)
            for var in offs:
                if var != basevar:
                    jit[var] = p[var] + CHAIN_JITTER * np.exp(2j * np.pi * rng.random(len(p[var])))
            local = np.maximum(np.abs(ev(jit)), scale)
            r3 = max(r3, float(np.max(np.abs(ev(p)) / local)))

    # 4. translations per component
    r4 = 0.0
    for comp in roots.components():
        nu = complex(rng.random() + 1j * rng.random())
        p = dict(pts)
        for i in comp:
            for a in range(1, l[i] + 1):
                p[x_name(a, i + 1)] = pts[x_name(a, i + 1)] - nu
            p[u_name(i + 1)] = pts[u_name(i + 1)] + n[i] * nu
        r4 = max(r4, float(np.max(residual(ev(p), base))))

    return MembershipReport(r1, r2, r3, r4, not chains, count,
                            {"pole_divisors": pole_detail, "chain_count": len(chains)})


def closure_check(f: GradedElement, g: GradedElement, n: WeightForm, roots: RootData,
                  params: EllipticParams, rng=None, count=None) -> MembershipReport:
    return q_membership(star(f, g, roots), n, roots, params, rng, count)


def subsystem_embedding_check(roots: RootData, keep: Sequence[int], pairs, params,
                              rng=None, count=None) -> CheckResult:
    """Star products computed in the subsystem, embedded, versus computed in ``roots``.

    ``pairs`` are element pairs over the subsystem ``roots.subsystem(keep)``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    sub = roots.subsystem(keep)
    worst, samples = 0.0, 0
    for f, g in pairs:
        left = embed(star(f, g, sub), keep, roots.rank)
        right = star(embed(f, keep, roots.rank), embed(g, keep, roots.rank), roots)
        if left.grade.total == 0 and not variables(left.body) and not variables(right.body):
            r = float(residual(evaluate(left.body, {}, params), evaluate(right.body, {}, params)))
            worst = max(worst, r)
            continue
        rep = equal_numeric(left, right, params, rng, count)
        worst = max(worst, rep.residual)
        samples += rep.samples
    return CheckResult("subsystem_embedding", worst, params.tol, samples,
                       anchor="subsystem algebras embed as graded subalgebras",
                       detail={"keep": list(keep)})
