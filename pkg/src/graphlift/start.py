"""Start-vertex distributions ``pi_1(v) = f(deg v) / K`` and their samplers."""

from __future__ import annotations

import ast
import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Callable

from .graph import Graph, QueryCounter

KINDS = ("uniform", "rw", "degree_polynomial")


class DegreePolynomial:
    """Integer polynomial in one variable ``d`` parsed from text like ``"d*(d-1)"``.

    Supports ``+ - *``, unary minus, integer literals and ``**`` with a
    non-negative integer exponent.  Evaluation is exact over the integers.
    """

    def __init__(self, expr: str):
        self.expr = expr.strip()
        try:
            tree = ast.parse(self.expr, mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse degree polynomial {expr!r}") from exc
        self.coeffs = _trim(self._poly(tree.body))

    def _poly(self, node) -> list[int]:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return [node.value]
        if isinstance(node, ast.Name) and node.id == "d":
            return [0, 1]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = self._poly(node.operand)
            return [-c for c in p] if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            a = self._poly(node.left)
            if isinstance(node.op, ast.Pow):
                e = node.right
                if not (isinstance(e, ast.Constant) and type(e.value) is int and e.value >= 0):
                    raise ValueError(f"exponent must be a non-negative integer in {self.expr!r}")
                out = [1]
                for _ in range(e.value):
                    out = _mul(out, a)
                return out
            b = self._poly(node.right)
            if isinstance(node.op, ast.Add):
                return _add(a, b)
            if isinstance(node.op, ast.Sub):
                return _add(a, [-c for c in b])
            if isinstance(node.op, ast.Mult):
                return _mul(a, b)
        raise ValueError(f"unsupported term in degree polynomial {self.expr!r}")

    def __call__(self, d: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * d + c
        return out

    def __eq__(self, other):
        return isinstance(other, DegreePolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"DegreePolynomial({self.expr!r})"


def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@dataclass(frozen=True)
class StartDistribution:
    """Distribution of the first lifted vertex on one specific graph.

    ``weight`` is the degree weight ``f`` and ``K`` the normalizer
    ``sum_v f(deg v)``.  ``burn_in``, ``spacing`` and ``lazy`` only matter
    for the random-walk kind.
    """

    kind: str
    weight: Callable[[int], int]
    K: int
    burn_in: int = 0
    spacing: int = 0
    lazy: bool = False
    cumulative: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def uniform(cls, g: Graph) -> "StartDistribution":
        return cls("uniform", DegreePolynomial("1"), g.n)

    @classmethod
    def rw(cls, g: Graph, burn_in: int = 100, spacing: int = 3, lazy: bool = False) -> "StartDistribution":
        if burn_in < 0 or spacing < 0:
            raise ValueError("burn_in and spacing must be non-negative")
        return cls("rw", DegreePolynomial("d"), 2 * g.m, burn_in, spacing, lazy)

    @classmethod
    def degree_polynomial(cls, g: Graph, f: str | Callable[[int], int]) -> "StartDistribution":
        if isinstance(f, str):
            f = DegreePolynomial(f)
        weights = [f(d) for d in g.degree]
        if any(w < 0 for w in weights):
            raise ValueError("degree weight must be non-negative on every vertex")
        cumulative = tuple(accumulate(weights))
        K = cumulative[-1] if cumulative else 0
        if K <= 0:
            raise ValueError("degree weight vanishes on every vertex")
        return cls("degree_polynomial", f, K, cumulative=cumulative)

    @classmethod
    def from_spec(cls, g: Graph, spec: str, burn_in: int = 100, spacing: int = 3,
                  lazy: bool = False) -> "StartDistribution":
        """Parse ``uniform``, ``rw`` or ``degree-poly:<expr>``."""
        if spec == "uniform":
            return cls.uniform(g)
        if spec in ("rw", "rw_stationary"):
            return cls.rw(g, burn_in=burn_in, spacing=spacing, lazy=lazy)
        for prefix in ("degree-poly:", "degree_polynomial:", "poly:"):
            if spec.startswith(prefix):
                return cls.degree_polynomial(g, spec[len(prefix):])
        raise ValueError(f"unknown start distribution {spec!r}")

    @property
    def label(self) -> str:
        if self.kind == "degree_polynomial":
            expr = getattr(self.weight, "expr", repr(self.weight))
            return f"degree-poly:{expr}"
        return self.kind

    @property
    def walk_steps(self) -> int:
        """Walk steps (and queries) spent before each sample."""
        return self.spacing if self.kind == "rw" else 0

    def prob(self, degree: int) -> float:
        return self.weight(degree) / self.K

    def exact_prob(self, degree: int) -> Fraction:
        return Fraction(self.weight(degree), self.K)


class StartSampler:
    """Draws successive start vertices for one chain.

    Uniform and degree-polynomial draws are independent and cost no queries.
    The random-walk sampler keeps a walker position: it is placed uniformly,
    burned in once on construction, then advanced ``spacing`` steps before
    each draw, each step charged as one neighborhood query.
    """

    def __init__(self, g: Graph, start: StartDistribution, rng, counter: QueryCounter | None = None):
        self.g = g
        self.start = start
        self.rng = rng
        self.counter = counter if counter is not None else QueryCounter()
        self.position = None
        if start.kind == "rw":
            self.position = rng.randrange(g.n)
            self.walk(start.burn_in)

    def walk(self, steps: int) -> int:
        g, rng, counter = self.g, self.rng, self.counter
        v = self.position
        lazy = self.start.lazy
        for _ in range(steps):
            nb = g.neighbors(v, counter)
            if lazy and rng.random() < 0.5:
                continue
            v = nb[rng.randrange(len(nb))]
        self.position = v
        return v

    def __call__(self) -> int:
        kind = self.start.kind
        if kind == "uniform":
            return self.rng.randrange(self.g.n)
        if kind == "rw":
            return self.walk(self.start.spacing)
        x = self.rng.random() * self.start.K
        return bisect.bisect_right(self.start.cumulative, x)


def sample_start(g: Graph, start: StartDistribution, rng, counter: QueryCounter | None = None,
                 sampler: StartSampler | None = None) -> int:
    """One start vertex; pass ``sampler`` to continue an existing random walk."""
    if sampler is None:
        sampler = StartSampler(g, start, rng, counter)
    return sampler()
