"""Root data, grades and weight forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, RankMismatchError


@dataclass(frozen=True)
class RootData:
    """Simple roots ``delta_1..delta_h`` with their scalar products.

    ``gram[i][j] = (delta_i, delta_j)``.  For affine data the indices are read
    cyclically (``Z_h``).
    """

    gram: tuple
    affine: bool = False
    name: str = ""
    cartan: tuple = field(init=False, repr=False)

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InvalidParameterError("gram must be a square matrix")
        if not np.allclose(g, g.T):
            raise InvalidParameterError("gram must be symmetric")
        if np.any(np.diag(g) == 0):
            raise InvalidParameterError("gram diagonal entries must be nonzero")
        object.__setattr__(self, "gram", tuple(tuple(float(v) for v in row) for row in g))
        cartan = 2 * g / np.diag(g)[:, None]
        if not np.allclose(cartan, np.round(cartan)):
            raise InvalidParameterError("Cartan entries 2(d_i,d_j)/(d_i,d_i) must be integers")
        object.__setattr__(self, "cartan",
                           tuple(tuple(int(round(v)) for v in row) for row in cartan))

    # constructors -----------------------------------------------------------

    @classmethod
    def type_A(cls, h: int) -> "RootData":
        if h < 0:
            raise InvalidParameterError("rank must be non-negative")
        g = 2 * np.eye(h) - np.eye(h, k=1) - np.eye(h, k=-1)
        return cls(tuple(map(tuple, g)), name=f"A{h}")

    @classmethod
    def affine_A(cls, h: int) -> "RootData":
        """Affine sl_h: cyclic chain; for ``h = 2`` the two roots pair to -2."""
        if h < 2:
            raise InvalidParameterError("affine sl_h needs h >= 2")
        g = 2 * np.eye(h)
        for i in range(h):
            g[i, (i + 1) % h] -= 1
            g[(i + 1) % h, i] -= 1
        return cls(tuple(map(tuple, g)), affine=True, name=f"A{h}~")

    @classmethod
    def product(cls, *parts: "RootData") -> "RootData":
        h = sum(p.rank for p in parts)
        g = np.zeros((h, h))
        k = 0
        for p in parts:
            g[k:k + p.rank, k:k + p.rank] = p.gram_matrix
            k += p.rank
        return cls(tuple(map(tuple, g)), name="x".join(p.name for p in parts))

    # queries ----------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def gram_matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=float).reshape(self.rank, self.rank)

    @property
    def cartan_matrix(self) -> np.ndarray:
        return np.array(self.cartan, dtype=int).reshape(self.rank, self.rank)

    def pairing(self, l: Sequence[int], i: int) -> float:
        """``(l, delta_i)`` for a grade vector ``l`` (0-based ``i``)."""
        return float(sum(l[j] * self.gram[j][i] for j in range(self.rank)))

    def coupled(self, i: int, j: int) -> bool:
        return i != j and self.gram[i][j] != 0

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the graph with edges ``(d_i, d_j) != 0``."""
        seen: set[int] = set()
        out = []
        for start in range(self.rank):
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(self.rank):
                    if j not in seen and self.coupled(i, j):
                        seen.add(j)
                        stack.append(j)
            out.append(tuple(sorted(comp)))
        return out

    def subsystem(self, keep: Iterable[int]) -> "RootData":
        keep = sorted(keep)
        g = self.gram_matrix[np.ix_(keep, keep)] if keep else np.zeros((0, 0))
        return RootData(tuple(map(tuple, g)), name=f"{self.name}|{keep}")

    def positive_roots(self, cutoff: Sequence[int] | None = None) -> list[tuple[tuple[int, ...], int]]:
        """Positive roots as ``(vector, multiplicity)``.

        Finite type A: the intervals ``delta_i + ... + delta_j``.  Affine sl_h:
        cyclic intervals whose length is not a multiple of ``h`` (real roots,
        multiplicity 1) and ``k(delta_1 + ... + delta_h)`` with multiplicity
        ``h - 1``; ``cutoff`` bounds the coefficients.
        """
        h = self.rank
        if not self.affine:
            if _is_type_A(self):
                return [(tuple(1 if i <= k <= j else 0 for k in range(h)), 1)
                        for i in range(h) for j in range(i, h)]
            return [(r, 1) for r in _simply_laced_roots(self)]
        if cutoff is None:
            raise InvalidParameterError("affine positive roots need a cutoff")
        cutoff = tuple(cutoff)
        out = []
        top = max(cutoff) + 1
        for length in range(1, h * top + 1):
            if length % h == 0:
                k = length // h
                vec = tuple([k] * h)
                if all(v <= c for v, c in zip(vec, cutoff)):
                    out.append((vec, h - 1))
                continue
            for start in range(h):
                vec = [0] * h
                for s in range(length):
                    vec[(start + s) % h] += 1
                if all(v <= c for v, c in zip(vec, cutoff)):
                    out.append((tuple(vec), 1))
        return out


def _simply_laced_roots(roots: RootData, limit: int = 10_000) -> list[tuple[int, ...]]:
    """Positive roots of a finite simply-laced system by adding simple roots
    while ``(a, d_i) = -1``."""
    g = np.rint(roots.gram_matrix).astype(int)
    h = roots.rank
    if not np.all(np.diag(g) == 2) or np.any(g - np.diag(np.diag(g)) > 0):
        raise InvalidParameterError("positive roots need a simply-laced Cartan matrix")
    found = [tuple(int(i == j) for j in range(h)) for i in range(h)]
    seen = set(found)
    k = 0
    while k < len(found):
        a = np.array(found[k])
        for i in range(h):
            if a @ g[:, i] == -1:
                b = tuple(int(v) for v in a + np.eye(h, dtype=int)[i])
                if b not in seen:
                    seen.add(b)
                    found.append(b)
        if len(found) > limit:
            raise InvalidParameterError("root system is not of finite type")
        k += 1
    return sorted(found, key=lambda r: (sum(r), r))


def _is_type_A(roots: RootData) -> bool:
    return roots.rank == 0 or np.allclose(roots.gram_matrix, RootData.type_A(roots.rank).gram_matrix)


@dataclass(frozen=True)
class Grade:
    """An element ``l_1 delta_1 + ... + l_h delta_h`` of ``L+``."""

    counts: tuple

    def __init__(self, counts: Iterable[int]):
        c = tuple(int(v) for v in counts)
        if any(v < 0 for v in c):
            raise InvalidParameterError(f"grade entries must be non-negative, got {c}")
        object.__setattr__(self, "counts", c)

    @classmethod
    def zero(cls, rank: int) -> "Grade":
        return cls((0,) * rank)

    @classmethod
    def unit(cls, rank: int, i: int, k: int = 1) -> "Grade":
        return cls(tuple(k if j == i else 0 for j in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __add__(self, other: "Grade") -> "Grade":
        if len(other) != len(self):
            raise RankMismatchError("grades of different rank")
        return Grade(a + b for a, b in zip(self, other))

    def __str__(self):
        terms = [f"{c}d{i + 1}" if c != 1 else f"d{i + 1}" for i, c in enumerate(self.counts) if c]
        return " + ".join(terms) or "0"

    def check(self, roots: RootData) -> None:
        if len(self) != roots.rank:
            raise RankMismatchError(f"grade {self.counts} does not match rank {roots.rank}")

    def below(self) -> list["Grade"]:
        """All grades ``0 <= k <= self`` componentwise."""
        return [Grade(v) for v in iproduct(*(range(c + 1) for c in self.counts))]


@dataclass(frozen=True)
class WeightForm:
    """The linear form ``n: L -> Z``, stored by its values ``n_i = n(delta_i)``."""

    values: tuple

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", tuple(int(v) for v in values))

    def __call__(self, l: Iterable[int]) -> int:
        return sum(a * b for a, b in zip(self.values, l))

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def check(self, roots: RootData) -> None:
        if len(self) != roots.rank:
            raise RankMismatchError(f"weight {self.values} does not match rank {roots.rank}")


def x_name(alpha: int, i: int) -> str:
    """Variable name of ``x_{alpha,i}`` (1-based indices)."""
    return f"x_{alpha}_{i}"


def y_name(alpha: int, i: int) -> str:
    return f"y_{alpha}_{i}"


def u_name(i: int) -> str:
    return f"u_{i}"


def x_names(grade: Grade) -> list[str]:
    return [x_name(a, i + 1) for i, c in enumerate(grade) for a in range(1, c + 1)]


def u_names(rank: int) -> list[str]:
    return [u_name(i + 1) for i in range(rank)]
