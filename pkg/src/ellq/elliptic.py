"""Theta function, theta spaces of order m and their numerical certification.

Conventions: the lattice is ``Z + Z*eta`` with ``Im eta > 0`` and

    theta(z) = sum_a (-1)^a exp(2 pi i (a z + a (a - 1) / 2 * eta)),

so ``theta(z + 1) = theta(z)`` and ``theta(z + eta) = -exp(-2 pi i z) theta(z)``.
The space ``Theta_{m,c}`` consists of holomorphic ``f`` with ``f(z + 1) = f(z)``
and ``f(z + eta) = exp(-2 pi i (m z + c)) f(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ContourError, EmptySpaceError, InvalidParameterError

TWO_PI_I = 2j * np.pi
MAX_SERIES_INDEX = 200


@dataclass(frozen=True)
class EllipticParams:
    """Lattice parameter, quantization parameter and numerical knobs."""

    eta: complex = 0.31 + 1.07j
    tau: complex = 0.173 + 0.219j
    series_eps: float = 1e-15
    sample_count: int = 40
    tol: float = 1e-7
    pole_margin: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "tau", complex(self.tau))
        if self.eta.imag <= 0:
            raise InvalidParameterError(f"Im(eta) must be positive, got eta={self.eta}")
        for name in ("series_eps", "pole_margin"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.tol < 0:
            raise InvalidParameterError("tol must be non-negative")
        if self.sample_count < 1:
            raise InvalidParameterError("sample_count must be at least 1")

    def with_tau(self, tau: complex) -> "EllipticParams":
        return replace(self, tau=complex(tau))

    def with_(self, **changes) -> "EllipticParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ThetaLine:
    """The line bundle datum (m, c) of ``Theta_{m,c}``."""

    order: int
    shift: complex

    def dimension(self, eta: complex) -> int:
        if self.order > 0:
            return self.order
        if self.order < 0:
            return 0
        return 1 if lattice_distance(self.shift, eta) < 1e-12 else 0


def residual(a, b) -> np.ndarray:
    """Normalized discrepancy ``|a - b| / (|a| + |b| + 1)``, elementwise."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.abs(a - b) / (np.abs(a) + np.abs(b) + 1.0)


def lattice_coordinates(w, eta: complex):
    """Real coordinates (s, t) with ``w = s + t * eta``."""
    w = np.asarray(w, dtype=complex)
    t = w.imag / eta.imag
    s = w.real - t * eta.real
    return s, t


def lattice_distance(w, eta: complex):
    """Distance from ``w`` to the nearest point of ``Z + Z*eta``."""
    s, t = lattice_coordinates(w, eta)
    best = None
    # nearest lattice point is among the rounding neighbours
    for dt in (-1.0, 0.0, 1.0):
        tt = np.round(t) + dt
        r = np.asarray(w) - tt * eta
        d = np.abs(r - np.round(r.real))
        best = d if best is None else np.minimum(best, d)
    return best


def sample_domain(rng: np.random.Generator, size, eta: complex) -> np.ndarray:
    """Uniform points ``a + b*eta`` with ``a, b`` in ``[0, 1)``."""
    a = rng.random(size)
    b = rng.random(size)
    return a + b * eta


def _theta_reduced(w: np.ndarray, eta: complex, eps: float) -> np.ndarray:
    q_half = np.exp(TWO_PI_I * w)
    total = 1.0 - q_half  # alpha = 0, 1
    # pair alpha = -k and alpha = k + 1 until the tail is negligible
    for k in range(1, MAX_SERIES_INDEX + 1):
        quad = k * (k + 1) / 2 * eta
        t_neg = (-1) ** k * np.exp(TWO_PI_I * (-k * w + quad))
        t_pos = (-1) ** (k + 1) * np.exp(TWO_PI_I * ((k + 1) * w + quad))
        total = total + t_neg + t_pos
        tail = np.maximum(np.abs(t_neg), np.abs(t_pos))
        if np.all(tail < eps * (np.abs(total) + 1.0)):
            return total
    raise InvalidParameterError(
        f"theta series did not converge within N={MAX_SERIES_INDEX} terms (Im eta={eta.imag})"
    )


def theta_value(z, eta: complex, eps: float = 1e-15):
    """Evaluate ``theta(z)`` for scalar or array ``z``.

    The argument is first translated by whole multiples of ``eta`` so its
    lattice coordinate lies in [-1/2, 1/2]; the quasi-periodicity factor is
    applied exactly and the remaining series is summed adaptively.
    """
    eta = complex(eta)
    if eta.imag <= 0:
        raise InvalidParameterError(f"Im(eta) must be positive, got {eta}")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    n = np.round(z.imag / eta.imag)
    w = z - n * eta
    base = _theta_reduced(w, eta, eps)
    # theta(w + n eta) = (-1)^n exp(-2 pi i (n w + n (n - 1) eta / 2)) theta(w)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    out = sign * np.exp(-TWO_PI_I * (n * w + n * (n - 1) / 2 * eta)) * base
    return out[0] if scalar else out


def theta(z, params: EllipticParams):
    return theta_value(z, params.eta, params.series_eps)


# ---------------------------------------------------------------------------
# theta spaces


def fourier_index_range(order: int, index: int, eta: complex, reach: float) -> range:
    """Range of block indices ``s`` needed for the basis function ``index``.

    Terms of the series behave like ``exp(-2 pi (Im eta (s j + m s (s-1)/2)
    + (j + s m) Im w))``; ``reach`` bounds ``|Im w|`` in units of ``Im eta``.
    """
    m, j = order, index
    lin = eta.imag * j + m * reach * eta.imag
    cut = 46.0 / (2 * np.pi)  # exp(-46) ~ 1e-20
    s = 0
    while eta.imag * m * s * (s - 1) / 2 - lin * s - j * reach * eta.imag < cut:
        s += 1
        if s > MAX_SERIES_INDEX:
            raise InvalidParameterError("theta space series would need too many terms")
    return range(-s, s + 2)


class ThetaFunction:
    """Basis element ``F_j(z + c/m)`` of ``Theta_{m,c}``.

    ``F_j(w) = sum_s exp(2 pi i ((j + s m) w + eta (s j + m s (s - 1) / 2)))``
    carries the Fourier modes ``k = j mod m``; the coefficients are those forced
    by the eta-multiplier recursion ``a_{k+m} = a_k exp(2 pi i (k eta + c))``.
    Writing the element as a function of ``z + c/m`` makes the family covariant
    under ``z -> z - nu, c -> c + m nu``.
    """

    def __init__(self, line: ThetaLine, index: int, params: EllipticParams):
        if not 0 <= index < line.order:
            raise ValueError("basis index out of range")
        self.line = line
        self.index = index
        self.params = params

    def __call__(self, z):
        m, j = self.line.order, self.index
        eta = self.params.eta
        z = np.asarray(z, dtype=complex)
        w = z + self.line.shift / m
        reach = float(np.max(np.abs(w.imag))) / eta.imag + 1.0 if w.size else 1.0
        s = np.arange(fourier_index_range(m, j, eta, reach).start,
                      fourier_index_range(m, j, eta, reach).stop)
        expo = (j + s * m) * w[..., None] + eta * (s * j + m * s * (s - 1) / 2)
        return np.exp(TWO_PI_I * expo).sum(axis=-1)

    def __repr__(self):
        return f"ThetaFunction(order={self.line.order}, shift={self.line.shift}, index={self.index})"


def theta_basis(line: ThetaLine, params: EllipticParams) -> list[ThetaFunction]:
    if line.order <= 0:
        raise EmptySpaceError(
            f"Theta_{{{line.order},c}} has no basis: dim = m for m > 0, 0 for m < 0, "
            "and for m = 0 it is 1 only when c lies in the lattice (constants)"
        )
    return [ThetaFunction(line, j, params) for j in range(line.order)]


def numerical_rank(matrix: np.ndarray, rel: float = 1e-8) -> int:
    sv = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel * sv[0]))


def basis_rank(functions: Sequence[Callable], params: EllipticParams,
               rng: np.random.Generator, points_per_function: int = 2) -> int:
    """Singular-value rank of the evaluation matrix at random points."""
    npts = max(points_per_function * len(functions), 1)
    z = sample_domain(rng, npts, params.eta)
    mat = np.column_stack([f(z) for f in functions])
    scale = np.max(np.abs(mat), axis=0)
    scale[scale == 0] = 1.0
    return numerical_rank(mat / scale)


@dataclass(frozen=True)
class MultiplierReport:
    line: ThetaLine
    period_residual: float
    quasi_residual: float
    samples: int

    @property
    def residual(self) -> float:
        return max(self.period_residual, self.quasi_residual)


def verify_multiplier(f: Callable, line: ThetaLine, params: EllipticParams,
                      rng: np.random.Generator | None = None,
                      samples: int = 100) -> MultiplierReport:
    rng = np.random.default_rng(0) if rng is None else rng
    z = sample_domain(rng, samples, params.eta)
    fz = f(z)
    r1 = residual(f(z + 1), fz)
    r2 = residual(f(z + params.eta), np.exp(-TWO_PI_I * (line.order * z + line.shift)) * fz)
    return MultiplierReport(line, float(np.max(r1)), float(np.max(r2)), samples)


# ---------------------------------------------------------------------------
# zeros by the argument principle


@dataclass(frozen=True)
class ZeroReport:
    line: ThetaLine
    count: complex
    zero_sum: complex
    count_residual: float
    sum_residual: float
    contour_origin: complex
    attempts: int

    @property
    def residual(self) -> float:
        return max(self.count_residual, self.sum_residual)


def _derivative(f, z, h=1e-3):
    return (f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)) / (12 * h)


def _zero_near_edge(f, z, fz, dfz, za, zb, margin: float, steps: int = 12) -> bool:
    """True if a zero of ``f`` lies within ``margin`` of the segment ``[za, zb]``.

    ``|f/f'|`` alone overestimates closeness for high order (the multiplier
    makes ``f'/f`` large everywhere), so flagged points are refined by Newton
    steps and the limit is measured against the segment.
    """
    step = fz / dfz
    cand = np.abs(step) < margin
    if not np.any(cand):
        return False
    w = z[cand] - step[cand]
    with np.errstate(all="ignore"):
        for _ in range(steps):
            w = w - f(w) / _derivative(f, w)
        # an unsettled iteration means no zero nearby
        ok = np.isfinite(w) & (np.abs(f(w) / _derivative(f, w)) < 1e-10)
    if not np.any(ok):
        return False
    d = zb - za
    s = np.clip(((w[ok] - za) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return bool(np.any(np.abs(w[ok] - (za + s * d)) < margin))


def zero_sum_check(f: Callable, line: ThetaLine, params: EllipticParams,
                   rng: np.random.Generator | None = None, nodes: int = 512,
                   max_attempts: int = 6) -> ZeroReport:
    """Count zeros and their sum in a fundamental parallelogram.

    The contour is the boundary of ``z0 + [0,1] + [0,1]*eta`` with a random
    small offset ``z0``; each edge uses Gauss-Legendre quadrature with
    ``nodes / 4`` points.  If a zero sits within ``pole_margin`` of the
    boundary (estimated by the Newton step ``|f/f'|``) the contour is moved.
    """
    if line.order <= 0:
        raise EmptySpaceError("zero counting needs a positive order")
    rng = np.random.default_rng(0) if rng is None else rng
    eta = params.eta
    x, w = np.polynomial.legendre.leggauss(max(nodes // 4, 8))
    t = (x + 1) / 2
    w = w / 2
    edges = [(0, 1), (1, 1 + eta), (1 + eta, eta), (eta, 0)]
    for attempt in range(1, max_attempts + 1):
        z0 = -0.5 - 0.5 * eta + (rng.random() - 0.5) * 0.3 + (rng.random() - 0.5) * 0.3 * eta
        count = 0j
        first = 0j
        too_close = False
        for a, b in edges:
            za, zb = z0 + a, z0 + b
            z = za + (zb - za) * t
            fz = f(z)
            dfz = _derivative(f, z)
            if _zero_near_edge(f, z, fz, dfz, za, zb, params.pole_margin):
                too_close = True
                break
            integrand = dfz / fz * (zb - za) * w
            count += integrand.sum()
            first += (z * integrand).sum()
        if too_close:
            continue
        count /= TWO_PI_I
        first /= TWO_PI_I
        expected_sum = line.order / 2 - line.shift
        return ZeroReport(
            line=line,
            count=count,
            zero_sum=first,
            count_residual=float(abs(count - line.order)),
            sum_residual=float(lattice_distance(first - expected_sum, eta)),
            contour_origin=z0,
            attempts=attempt,
        )
    raise ContourError(f"could not place contour away from zeros after {max_attempts} attempts")
