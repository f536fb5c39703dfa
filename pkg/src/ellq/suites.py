"""Named verification suites shared by the command line and the test suite.

Every suite takes a :class:`RunConfig` and returns a list of
:class:`CheckResult`.  Each suite draws from its own generator seeded with
``config.seed``, so running a suite alone or inside ``all`` gives the same
records.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .dims import hilbert_coefficient, numeric_dim
from .elements import q0_element, q_delta_element, random_symmetric
from .elliptic import (EllipticParams, ThetaLine, theta, theta_basis, basis_rank,
                       sample_domain, verify_multiplier, zero_sum_check, residual)
from .errors import InvalidParameterError
from .intertwiner import TwistData, intertwine_check
from .oper import OperatorAlgebra, double_swap_check, homomorphism_check
from .report import CheckResult, Report, exact_check
from .roots import Grade, RootData, WeightForm
from .star import equal_numeric, q_membership, star
from .showcase.affine import affine_commuting_check, gspace_check
from .showcase.belavin import belavin_membership, relations10_check, z_consistency_check
from .showcase.generalized_r import generalized_r_check, ybe_probe
from .showcase.grassmann import grassmann_check
from .showcase.hm import DEFAULT_T1, DEFAULT_T2, hm_commuting_check, hm_taus
from .showcase.sklyanin import sklyanin_hilbert_check

DEFAULT_SEED = 42


@dataclass
class RunConfig:
    """Everything a suite needs.  ``roots``/``n``/``p`` override the built-in
    configurations of the suites that accept them; ``None`` keeps the defaults."""

    suite: str = "theta"
    roots: str | None = None
    n: tuple | None = None
    p: tuple | None = None
    eta: complex = EllipticParams.eta
    tau: complex = EllipticParams.tau
    tau1: complex = DEFAULT_T1
    tau2: complex = DEFAULT_T2
    tau3: complex | None = None
    tol: float = EllipticParams.tol
    series_eps: float = EllipticParams.series_eps
    pole_margin: float = EllipticParams.pole_margin
    sample_count: int = EllipticParams.sample_count
    seed: int = DEFAULT_SEED
    report_path: str | None = None
    extra: dict = field(default_factory=dict)

    def params(self) -> EllipticParams:
        return EllipticParams(eta=self.eta, tau=self.tau, series_eps=self.series_eps,
                              sample_count=self.sample_count, tol=self.tol,
                              pole_margin=self.pole_margin)

    def echo(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "suite", "roots", "n", "p", "eta", "tau", "tau1", "tau2", "tau3", "tol",
            "series_eps", "pole_margin", "sample_count", "seed")}
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in out.items()}

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def parse_roots(text: str) -> RootData:
    """``A2``, ``affine3`` (or ``A3^``) and products such as ``A1xA1``."""
    parts = [t.strip() for t in text.replace("×", "x").split("x") if t.strip()]
    if not parts:
        raise InvalidParameterError(f"empty root data spec {text!r}")
    out = []
    for t in parts:
        low = t.lower()
        try:
            if low.startswith("affine"):
                out.append(RootData.affine_A(int(low[6:])))
            elif low.startswith("a") and low.endswith("^"):
                out.append(RootData.affine_A(int(low[1:-1])))
            elif low.startswith("a"):
                out.append(RootData.type_A(int(low[1:])))
            else:
                raise ValueError
        except ValueError:
            raise InvalidParameterError(f"cannot read root data {t!r}") from None
    return out[0] if len(out) == 1 else RootData.product(*out)


def _prefixed(prefix: str, checks) -> list[CheckResult]:
    """Put ``prefix`` in front of each name, dropping a repeated leading part."""
    head = prefix.split(".")[0] + "."
    out = []
    for c in checks:
        name = c.name[len(head):] if c.name.startswith(head) else c.name
        out.append(replace(c, name=f"{prefix}.{name}"))
    return out


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    res = fn(*args, **kw)
    return res, time.perf_counter() - t0


# ---------------------------------------------------------------------------
# core suites


def suite_theta(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    out = []
    t0 = time.perf_counter()
    z = sample_domain(rng, 100, params.eta)
    tz = theta(z, params)
    r1 = float(np.max(residual(theta(z + 1, params), tz)))
    r2 = float(np.max(residual(theta(z + params.eta, params),
                               -np.exp(-2j * np.pi * z) * tz)))
    refl = float(np.max(np.abs(theta(-z, params) + np.exp(-2j * np.pi * z) * tz)
                        / np.maximum(np.abs(tz), 1.0)))
    dt = time.perf_counter() - t0
    out.append(CheckResult("theta.period_1", r1, params.tol, 100,
                           anchor="theta(z + 1) = theta(z)", wall_time=dt))
    out.append(CheckResult("theta.period_eta", r2, params.tol, 100,
                           anchor="theta(z + eta) = -exp(-2 pi i z) theta(z)", wall_time=dt))
    out.append(CheckResult("theta.reflection", refl, params.tol, 100,
                           anchor="theta(-z) = -exp(-2 pi i z) theta(z)", wall_time=dt))
    out.append(CheckResult("theta.zero", float(abs(theta(0.0, params))), 1e-12, 1,
                           anchor="theta(0) = 0"))
    for m in (1, 2, 3, 5):
        c = complex(rng.normal(), rng.normal()) * 0.3
        line = ThetaLine(m, c)
        basis = theta_basis(line, params)
        (rank, dt) = _timed(basis_rank, basis, params, rng)
        out.append(CheckResult(f"theta.rank_m{m}", abs(rank - m), 0.5, 2 * m,
                               anchor="dim Theta_{m,c} = m", detail={"rank": rank},
                               wall_time=dt))
        coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
        f = lambda w, b=basis, a=coeffs: sum(ak * bk(w) for ak, bk in zip(a, b))  # noqa: E731
        mult, dt = _timed(verify_multiplier, f, line, params, rng)
        out.append(CheckResult(f"theta.multiplier_m{m}", mult.residual, params.tol, mult.samples,
                               anchor="sections of Theta_{m,c} carry the (m, c) multiplier",
                               wall_time=dt))
        zr, dt = _timed(zero_sum_check, f, line, params, rng)
        out.append(CheckResult(f"theta.zero_count_m{m}", zr.count_residual, 1e-5, 1,
                               anchor="a section of Theta_{m,c} has m zeros",
                               detail={"attempts": zr.attempts}, wall_time=dt))
        out.append(CheckResult(f"theta.zero_sum_m{m}", zr.sum_residual, 1e-5, 1,
                               anchor="the zeros sum to m/2 - c modulo the lattice",
                               wall_time=dt))
    return out


ASSOC_GRADES = {
    1: [(1,), (2,)],
    2: [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)],
}


def _assoc_grades(roots: RootData) -> list[tuple]:
    if roots.rank in ASSOC_GRADES:
        return ASSOC_GRADES[roots.rank]
    return [tuple(int(i == j) for j in range(roots.rank)) for i in range(roots.rank)]


def suite_assoc(cfg: RunConfig, triples: int = 5) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    systems = [parse_roots(cfg.roots)] if cfg.roots else [RootData.type_A(1), RootData.type_A(2)]
    out = []
    for roots in systems:
        grades = _assoc_grades(roots)
        for k in range(triples):
            # per-colour degree <= 2 in each factor, total degree kept small
            ls = [Grade(grades[rng.integers(len(grades))]) for _ in range(3)]
            while sum(g.total for g in ls) > 4:
                ls = [Grade(grades[rng.integers(len(grades))]) for _ in range(3)]
            f, g, h = (random_symmetric(l, roots, rng) for l in ls)
            t0 = time.perf_counter()
            left = star(star(f, g, roots), h, roots)
            right = star(f, star(g, h, roots), roots)
            res = equal_numeric(left, right, params, rng, params.sample_count,
                                name=f"assoc.{roots.name}.triple{k}")
            res.anchor = "(f*g)*h = f*(g*h)"
            res.detail = {"grades": [list(l) for l in ls]}
            res.wall_time = time.perf_counter() - t0
            out.append(res)
    return out


def _closure_family(roots: RootData, n: WeightForm, rng) -> list:
    gens = [q_delta_element(i, n, roots, rng) for i in range(roots.rank) if n[i] > 0]
    zero = q0_element(n, roots, rng)
    family = list(gens) + [zero]
    prods = []
    for a in family:
        for b in family:
            if a.grade.total + b.grade.total > 0:
                prods.append(star(a, b, roots))
    return family + prods


def _closure_configs(cfg: RunConfig):
    if cfg.roots or cfg.n:
        roots = parse_roots(cfg.roots or "A1")
        n = WeightForm(cfg.n or (1,) * roots.rank)
        return [(roots, n)]
    return [(RootData.type_A(1), WeightForm((2,))), (RootData.type_A(2), WeightForm((1, 1)))]


def suite_closure(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    out = []
    for roots, n in _closure_configs(cfg):
        for k, f in enumerate(_closure_family(roots, n, rng)):
            tag = f"closure.{roots.name}.n{''.join(map(str, n))}.el{k:02d}"
            t0 = time.perf_counter()
            rep = q_membership(f, n, roots, params, rng)
            checks = rep.checks(tag, params.tol)
            dt = time.perf_counter() - t0
            for c in checks:
                c.wall_time = dt / len(checks)
                c.detail["grade"] = list(f.grade)
            out.extend(checks)
    return out


DIM_TABLE = [
    # (roots, n, grade, expected)
    ("A1", (2,), (1,), 2),
    ("A1", (2,), (2,), 3),
    ("A1", (2,), (3,), 4),
    ("A2", (1, 1), (1, 1), 3),
    ("A1xA1", (2, 3), (1, 1), 6),
]
DIM_SEEDS = 5


def suite_dims(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    taus = [params.tau, params.tau * (0.7 - 0.4j)]
    if cfg.roots or cfg.n:
        roots_txt = cfg.roots or "A1"
        roots = parse_roots(roots_txt)
        n = tuple(cfg.n or (1,) * roots.rank)
        grades = [tuple(int(i == j) for j in range(roots.rank)) for i in range(roots.rank)]
        grades.append((1,) * roots.rank)
        table = [(roots_txt, n, g, hilbert_coefficient(roots, WeightForm(n), g)) for g in grades]
    else:
        table = DIM_TABLE
    out = []
    for roots_txt, n, grade, expected in table:
        roots = parse_roots(roots_txt)
        measured = []
        t0 = time.perf_counter()
        for s in range(DIM_SEEDS):
            for tau in taus:
                rng = np.random.default_rng([cfg.seed, s])
                measured.append(numeric_dim(WeightForm(n), Grade(grade), roots,
                                            params.with_tau(tau), rng))
        chk = exact_check(f"dims.{roots.name}.n{''.join(map(str, n))}.l{''.join(map(str, grade))}",
                          all(d == expected for d in measured),
                          anchor="graded dimension of Q",
                          expected=expected, measured=measured,
                          hilbert=hilbert_coefficient(roots, WeightForm(n), grade))
        chk.samples = len(measured)
        chk.wall_time = time.perf_counter() - t0
        out.append(chk)
    return out


def _repr_configs(cfg: RunConfig):
    if cfg.roots or cfg.n or cfg.p:
        roots = parse_roots(cfg.roots or "A1")
        return [(roots, WeightForm(cfg.n or (1,) * roots.rank), tuple(cfg.p or (2,) * roots.rank))]
    return [(RootData.type_A(1), WeightForm((2,)), (2,)),
            (RootData.type_A(2), WeightForm((1, 1)), (2, 2))]


def suite_repr(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    out = []
    for roots, n, p in _repr_configs(cfg):
        alg = OperatorAlgebra(roots, p)
        family = [q_delta_element(i, n, roots, rng) for i in range(roots.rank) if n[i] > 0]
        family.append(q0_element(n, roots, rng))
        tag = f"repr.{roots.name}.p{''.join(map(str, p))}"
        for a, f in enumerate(family):
            for b, g in enumerate(family):
                if f.grade.total + g.grade.total == 0:
                    continue
                res = homomorphism_check(f, g, alg, params, rng)
                out.append(replace(res, name=f"{tag}.hom{a}{b}"))
        for a in range(alg.size):
            for b in range(alg.size):
                if a != b:
                    res = double_swap_check(alg, a, b, params, rng)
                    out.append(replace(res, name=f"{tag}.swap{a}{b}"))
    return out


def _intertwine_configs(cfg: RunConfig):
    if cfg.roots or cfg.n or cfg.p:
        roots = parse_roots(cfg.roots or "A1")
        return [(roots, tuple(cfg.n or (1,) * roots.rank), tuple(cfg.p or (2,) * roots.rank))]
    return [(RootData.type_A(1), (1,), (2,)),
            (RootData.type_A(2), (1, 1), (1, 1)),
            (RootData.type_A(2), (1, 1), (2, 2))]


def _intertwine_pairs(roots, n, twist, rng):
    nw, npw = WeightForm(n), WeightForm(twist.nprime)
    fs = [q_delta_element(i, nw, roots, rng) for i in range(roots.rank) if n[i] > 0]
    gs = [q_delta_element(i, npw, roots, rng) for i in range(roots.rank) if npw[i] > 0]
    if not gs:
        gs = [q0_element(npw, roots, rng)]
    return [(f, g) for f in fs for g in gs]


def suite_intertwine(cfg: RunConfig, printed: bool = True) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    out = []
    for roots, n, p in _intertwine_configs(cfg):
        twist = TwistData.build(roots, n, p)
        tag = f"intertwine.{roots.name}.n{''.join(map(str, n))}.p{''.join(map(str, p))}"
        for k, (f, g) in enumerate(_intertwine_pairs(roots, n, twist, rng)):
            res = intertwine_check(f, g, twist, params, rng)
            res.detail["nprime"] = list(twist.nprime)
            out.append(replace(res, name=f"{tag}.pair{k}"))
    if printed and not (cfg.roots or cfg.n or cfg.p):
        # the twist exactly as printed, recorded for comparison only
        roots = RootData.type_A(1)
        twist = TwistData.build(roots, (1,), (2,), variant="printed")
        f, g = _intertwine_pairs(roots, (1,), twist, rng)[0]
        res = intertwine_check(f, g, twist, params, rng)
        out.append(CheckResult("intertwine.printed_variant.info", 0.0, 1.0, res.samples,
                               anchor="informational: twist with the printed constants",
                               detail={"residual": res.residual}, wall_time=res.wall_time))
    return out


# ---------------------------------------------------------------------------
# showcase suites


def suite_belavin(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    rng = cfg.rng()
    p = tuple(cfg.p or (2, 2))
    h, m = len(p), cfg.extra.get("m", 1)
    out = _prefixed("belavin", relations10_check(h, m, p, params, rng))
    out += _prefixed("belavin", z_consistency_check(h, m, p, params, rng))
    out += _prefixed("belavin", belavin_membership(h, m, params, rng))
    return out


def suite_grassmann(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    h, m = cfg.extra.get("h", 2), cfg.extra.get("m", 4)
    taus = [params.tau, params.tau * (0.7 - 0.4j)]
    return _prefixed("grassmann", grassmann_check(h, m, params, cfg.rng(), taus=taus))


def suite_sklyanin(cfg: RunConfig) -> list[CheckResult]:
    h, m = cfg.extra.get("h", 2), cfg.extra.get("m", 1)
    return _prefixed("sklyanin", sklyanin_hilbert_check(h, m, cfg.params(), cfg.rng()))


def suite_generalized_r(cfg: RunConfig) -> list[CheckResult]:
    h, nu = cfg.extra.get("h", 3), cfg.extra.get("nu", 2)
    return _prefixed("generalized_r", generalized_r_check(h, nu, cfg.params(), cfg.rng()))


def suite_ybe(cfg: RunConfig) -> list[CheckResult]:
    h, nu = cfg.extra.get("h", 4), cfg.extra.get("nu", 2)
    params = cfg.params()
    out = [ybe_probe(h, nu, params, cfg.rng())]
    # the same probe at tau = 0 degenerates to the flip
    out.append(replace(ybe_probe(h, nu, params.with_tau(0.0), cfg.rng()), name="ybe.braid_tau0"))
    return _prefixed("ybe", out)


def suite_affine(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params()
    h = cfg.extra.get("h", 3)
    out = _prefixed("affine", gspace_check(h, params, cfg.rng()))
    out += _prefixed(f"affine.h{h}", affine_commuting_check(h, 2, params, cfg.rng(),
                                                            pairs=[(1, 1), (1, 2)]))
    if h == 3 and not cfg.extra:
        out += _prefixed("affine.h2", affine_commuting_check(2, 2, params, cfg.rng(),
                                                             pairs=[(1, 1), (1, 2)]))
    return out


def suite_hm(cfg: RunConfig) -> list[CheckResult]:
    taus = hm_taus(cfg.tau1, cfg.tau2, cfg.tau3)
    alpha_max = cfg.extra.get("alpha_max", 3)
    return _prefixed("hm", hm_commuting_check(alpha_max, taus, cfg.params(), cfg.rng()))


SUITES: dict[str, Callable[[RunConfig], list[CheckResult]]] = {
    "theta": suite_theta,
    "assoc": suite_assoc,
    "closure": suite_closure,
    "dims": suite_dims,
    "repr": suite_repr,
    "intertwine": suite_intertwine,
    "belavin": suite_belavin,
    "grassmann": suite_grassmann,
    "sklyanin-hilbert": suite_sklyanin,
    "generalized-r": suite_generalized_r,
    "ybe": suite_ybe,
    "affine-commute": suite_affine,
    "hm-commute": suite_hm,
}
SUITE_NAMES = list(SUITES) + ["all"]


def run_suite(cfg: RunConfig) -> Report:
    """Run ``cfg.suite`` (or every suite for ``all``) and collect a report.

    Configuration errors propagate; the caller maps them to exit codes.
    """
    if cfg.suite not in SUITE_NAMES:
        raise KeyError(cfg.suite)
    cfg.params()  # validate numerics before any work
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    report = Report(cfg.suite, cfg.echo())
    for name in names:
        report.add(SUITES[name](replace(cfg, suite=name)))
    return report
