"""Reduced irreducible root systems in the basis of simple roots.

Roots are integer coefficient tuples over the simple roots (Bourbaki
numbering).  The invariant form is rational and normalized so that short
roots have squared length 2.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

Root = tuple[int, ...]

FAMILIES = "ABCDEFG"


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 3,
            "D": n >= 4,
            "E": 6 <= n <= 8,
            "F": n == 4,
            "G": n == 2,
        }.get(f)
        if ok is None:
            raise RootSystemError(f"unknown type: family {f!r}")
        if not ok:
            raise RootSystemError(f"unknown type: invalid rank {n} for family {f}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise RootSystemError(f"unknown type: {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"


def all_types(max_rank: int = 8) -> list[SimpleType]:
    """Every supported simple type of rank <= max_rank, in a fixed order."""
    out = []
    for fam in FAMILIES:
        for n in range(1, max_rank + 1):
            try:
                out.append(SimpleType(fam, n))
            except RootSystemError:
                pass
    return out


def _dynkin(t: SimpleType) -> tuple[list[tuple[int, int]], list[int]]:
    """Edges (0-based) and squared root lengths of the Dynkin diagram."""
    n = t.rank
    path = [(i, i + 1) for i in range(n - 1)]
    if t.family == "A":
        return path, [2] * n
    if t.family == "B":
        return path, [4] * (n - 1) + [2]
    if t.family == "C":
        return path, [2] * (n - 1) + [4]
    if t.family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)], [2] * n
    if t.family == "E":
        edges = [(0, 2), (2, 3), (1, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        return edges, [2] * n
    if t.family == "F":
        return path, [4, 4, 2, 2]
    if t.family == "G":
        return path, [2, 6]
    raise RootSystemError(str(t))


@dataclass(frozen=True)
class RootSystem:
    type: SimpleType
    bilinear: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int], ...]
    roots: tuple[Root, ...]
    highest_root: Root
    exponents: tuple[int, ...]
    index: dict = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def simple_roots(self) -> list[Root]:
        r = self.rank
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]

    @property
    def marks(self) -> Root:
        return self.highest_root

    @property
    def coxeter_number(self) -> int:
        return sum(self.marks) + 1

    @property
    def positive_roots(self) -> list[Root]:
        return [a for a in self.roots if sum(a) > 0]

    @cached_property
    def lengths(self) -> np.ndarray:
        """Squared lengths (alpha_i, alpha_i) of the simple roots."""
        return np.array([int(self.bilinear[i][i]) for i in range(self.rank)])

    @cached_property
    def gram(self) -> np.ndarray:
        return np.array(self.bilinear, dtype=float)

    @cached_property
    def neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.rank)]
        for i, j in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return nb

    def form(self, a, b) -> Fraction:
        """Exact invariant form of two coefficient vectors."""
        B = self.bilinear
        return sum(
            (a[i] * b[j] * B[i][j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j]),
            Fraction(0),
        )

    def norm2(self, a) -> Fraction:
        return self.form(a, a)

    def is_root(self, a) -> bool:
        return tuple(a) in self.index

    def rho_check(self) -> np.ndarray:
        """Coordinates of <., rho-check> on simple roots: all ones."""
        return np.ones(self.rank, dtype=int)


def cartan_matrix(rs: RootSystem) -> np.ndarray:
    """A[i, j] = <alpha_i, alpha_j^vee> = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)."""
    r = rs.rank
    B = rs.bilinear
    A = np.zeros((r, r), dtype=int)
    for i in range(r):
        for j in range(r):
            v = 2 * B[i][j] / B[j][j]
            assert v.denominator == 1
            A[i, j] = int(v)
    return A


def reflect(A: np.ndarray, i: int, a) -> Root:
    """s_i(a) = a - <a, alpha_i^vee> alpha_i, in simple-root coordinates."""
    pair = sum(int(a[j]) * int(A[j, i]) for j in range(len(a)))
    out = list(a)
    out[i] -= pair
    return tuple(out)


def _root_key(a: Root):
    return (sum(a), a)


def _build_cartan_and_form(t: SimpleType):
    edges, lengths = _dynkin(t)
    r = t.rank
    B = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        B[i][i] = Fraction(lengths[i])
    for i, j in edges:
        v = -Fraction(max(lengths[i], lengths[j]), 2)
        B[i][j] = B[j][i] = v
    return edges, tuple(tuple(row) for row in B)


def exponents_from_heights(positive: list[Root], h: int) -> list[int]:
    """Exponents as the dual partition of the height distribution of R+."""
    counts = Counter(sum(a) for a in positive)
    out = []
    for k in range(1, h):
        out += [k] * (counts.get(k, 0) - counts.get(k + 1, 0))
    return sorted(out)


@lru_cache(maxsize=None)
def build_root_system(t: SimpleType | str) -> RootSystem:
    if isinstance(t, str):
        t = SimpleType.parse(t)
    edges, B = _build_cartan_and_form(t)
    r = t.rank
    A = np.array([[int(2 * B[i][j] / B[j][j]) for j in range(r)] for i in range(r)])
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        a = queue.popleft()
        for i in range(r):
            b = reflect(A, i, a)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    roots = sorted(seen, key=_root_key)
    if set(tuple(-x for x in a) for a in roots) != seen:
        raise RootSystemError("root set not symmetric")
    theta = roots[-1]
    h = sum(theta) + 1
    positive = [a for a in roots if sum(a) > 0]
    exps = exponents_from_heights(positive, h)
    index = {a: n for n, a in enumerate(roots)}
    return RootSystem(
        type=t,
        bilinear=B,
        edges=tuple(edges),
        roots=tuple(roots),
        highest_root=theta,
        exponents=tuple(exps),
        index=index,
    )


def height(rs: RootSystem, a) -> int:
    a = tuple(a)
    if not rs.is_root(a):
        raise RootSystemError(f"{a} is not a root of {rs.type}")
    return sum(a)


@dataclass(frozen=True)
class Bicoloring:
    color: tuple[int, ...]

    @property
    def black_count(self) -> int:
        return sum(1 for c in self.color if c == 1)

    @property
    def black(self) -> list[int]:
        return [i for i, c in enumerate(self.color) if c == 1]

    @property
    def white(self) -> list[int]:
        return [i for i, c in enumerate(self.color) if c == -1]


def bicolor(rs: RootSystem) -> Bicoloring:
    """Proper 2-colouring of the Dynkin tree; vertex 1 is black."""
    color = [0] * rs.rank
    color[0] = 1
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in rs.neighbors[i]:
            if color[j] == 0:
                color[j] = -color[i]
                queue.append(j)
            elif color[j] == color[i]:
                raise RootSystemError("Dynkin graph is not bipartite")
    return Bicoloring(tuple(color))


# Standard tables, used only as test fixtures and for cross-checks.
EXPONENT_TABLE = {
    "E6": (1, 4, 5, 7, 8, 11),
    "E7": (1, 5, 7, 9, 11, 13, 17),
    "E8": (1, 7, 11, 13, 17, 19, 23, 29),
    "F4": (1, 5, 7, 11),
    "G2": (1, 5),
}


def standard_exponents(t: SimpleType) -> tuple[int, ...]:
    n = t.rank
    if t.family == "A":
        return tuple(range(1, n + 1))
    if t.family in "BC":
        return tuple(range(1, 2 * n, 2))
    if t.family == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    return EXPONENT_TABLE[str(t)]
