"""Exact spectral invariants of finite graphs: cycle counts, characteristic
polynomials, zeta series, prime cycles and Euler products.

No floating point is used anywhere; the spectrum of a graph is represented
only through its characteristic polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import NamedTuple

from .cycles import BasedCycle, iter_cycles
from .errors import InternalConsistencyError, PreconditionError
from .graph import Graph, GraphMorphism
from .poly import IntegerPolynomial, TruncatedSeries

IntegerMatrix = list[list[int]]


def adjacency_matrix(x: Graph) -> IntegerMatrix:
    """``A[j][i]`` is the number of arcs from node ``i`` to node ``j``."""
    n = x.n_nodes
    a = [[0] * n for _ in range(n)]
    for arc in x.arcs:
        a[arc.tgt][arc.src] += 1
    return a


def _matmul(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    bt = list(zip(*b))
    return [[sum(p * q for p, q in zip(row, col)) for col in bt] for row in a]


def cycle_counts(x: Graph, m: int) -> list[int]:
    """``[c_1, ..., c_m]`` with ``c_k = trace(A^k)``."""
    if m < 1:
        raise ValueError("need at least one cycle count")
    a = adjacency_matrix(x)
    n = x.n_nodes
    counts = []
    power = a
    for k in range(1, m + 1):
        if k > 1:
            power = _matmul(power, a)
        counts.append(sum(power[i][i] for i in range(n)))
    return counts


def _berkowitz(m: IntegerMatrix) -> list[int]:
    """Coefficients of ``det(xI - m)`` in descending degree, division free.

    Works outward from the trailing 1x1 block; each step multiplies by the
    lower-triangular Toeplitz matrix built from ``1, -a, -RC, -RAC, ...``.
    """
    n = len(m)
    if n == 0:
        return [1]
    vec = [1, -m[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        size = n - k
        row = m[k][k + 1:]
        col = [m[i][k] for i in range(k + 1, n)]
        sub = [r[k + 1:] for r in m[k + 1:]]
        diags = [1, -m[k][k]]
        v = col
        for _ in range(size - 1):
            diags.append(-sum(p * q for p, q in zip(row, v)))
            v = [sum(p * q for p, q in zip(r, v)) for r in sub]
        vec = [
            sum(diags[i - j] * vec[j] for j in range(min(i, size - 1) + 1))
            for i in range(size + 1)
        ]
    return vec


def char_poly(x: Graph) -> IntegerPolynomial:
    """``det(xI - A)``, monic of degree ``|X0|``."""
    return IntegerPolynomial(reversed(_berkowitz(adjacency_matrix(x))))


def reversed_char_poly(x: Graph) -> IntegerPolynomial:
    """``u^n a(1/u)`` which equals ``det(I - uA)``; constant term 1."""
    return char_poly(x).reversed(x.n_nodes)


def default_order(x: Graph) -> int:
    return 2 * x.n_nodes + 4


def log_zeta(x: Graph, m: int) -> TruncatedSeries:
    """``sum_{k<=m} c_k u^k / k``."""
    if m == 0:
        return TruncatedSeries([0], 0)
    counts = cycle_counts(x, m)
    return TruncatedSeries([0] + [Fraction(c, k) for k, c in enumerate(counts, 1)], m)


def zeta_series(x: Graph, m: int | None = None) -> TruncatedSeries:
    """Zeta series through order ``m``, computed two independent ways.

    The inverse of the reversed characteristic polynomial is compared with
    ``exp(sum c_k u^k / k)``; any disagreement raises
    :class:`InternalConsistencyError`.
    """
    if m is None:
        m = default_order(x)
    if m < 0:
        raise ValueError("order must be non-negative")
    via_det = TruncatedSeries.from_polynomial(reversed_char_poly(x), m).inverse()
    via_counts = log_zeta(x, m).exp()
    if via_det != via_counts:
        raise InternalConsistencyError(
            f"zeta series disagree: det route {via_det.coeffs} vs count route {via_counts.coeffs}"
        )
    if not via_det.is_integral():
        raise InternalConsistencyError("zeta series has a non-integral coefficient")
    return via_det


# -- primes ------------------------------------------------------------------

def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius is defined for positive integers")
    result = 1
    p = 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    if k > 1:
        result = -result
    return result


def divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


@dataclass(frozen=True)
class PrimeCensus:
    """Number of primes (shift classes of prime cycles) of each length ``1..max_length``."""

    max_length: int
    counts: tuple[int, ...]
    representatives: dict[int, list[BasedCycle]] | None = field(default=None, compare=False)

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.max_length:
            raise IndexError(k)
        return self.counts[k - 1]

    def cycle_count(self, m: int) -> int:
        """``c_m`` recovered as ``sum_{k | m} k * cbar_k``."""
        return sum(k * self[k] for k in divisors(m))

    def nonzero(self) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.counts, 1) if c}

    def to_json(self) -> dict[str, str]:
        return {str(k): str(c) for k, c in self.nonzero().items()}


def prime_census(x: Graph, length: int) -> PrimeCensus:
    """Prime counts by Mobius inversion of the cycle counts."""
    if length < 1:
        raise ValueError("census length must be >= 1")
    c = cycle_counts(x, length)
    out = []
    for k in range(1, length + 1):
        total = sum(mobius(k // d) * c[d - 1] for d in divisors(k))
        q, r = divmod(total, k)
        if r or q < 0:
            raise InternalConsistencyError(f"prime count for length {k} is {Fraction(total, k)}")
        out.append(q)
    return PrimeCensus(length, tuple(out))


def enumerate_primes(x: Graph, length: int) -> dict[int, list[BasedCycle]]:
    """Least representative of every prime, grouped by length ``1..length``.

    Exponential; meant as an independent check of :func:`prime_census`.
    """
    found: dict[int, list[BasedCycle]] = {}
    for n in range(1, length + 1):
        reps = []
        for c in iter_cycles(x, n):
            if not c.is_prime():
                continue
            # cycles arrive in lexicographic order, so a class is first met at its least member
            if all(c <= c.shift(i) for i in range(1, n)):
                reps.append(c)
        if reps:
            found[n] = reps
    return found


def census_from_primes(primes: dict[int, list[BasedCycle]], length: int) -> PrimeCensus:
    return PrimeCensus(
        length,
        tuple(len(primes.get(k, ())) for k in range(1, length + 1)),
        representatives=primes,
    )


def euler_product(census: PrimeCensus, m: int) -> TruncatedSeries:
    """``prod_{k<=m} (1 - u^k)^(-cbar_k)`` through order ``m``."""
    if census.max_length < m:
        raise ValueError(f"census covers lengths up to {census.max_length}, need {m}")
    acc = TruncatedSeries.one(m)
    for k in range(1, m + 1):
        c = census[k]
        if not c:
            continue
        factor = [0] * (m + 1)
        for j in range(m // k + 1):
            factor[j * k] = comb(c + j - 1, j)
        acc = acc * TruncatedSeries(factor, m)
    return acc


# -- spectral predicates -----------------------------------------------------

def is_almost_isospectral(x: Graph, y: Graph) -> bool:
    return reversed_char_poly(x) == reversed_char_poly(y)


def is_isospectral(x: Graph, y: Graph) -> bool:
    return char_poly(x) == char_poly(y)


class DivisionCheck(NamedTuple):
    divides: bool
    quotient: IntegerPolynomial
    remainder: IntegerPolynomial


def check_covering_divides(f: GraphMorphism) -> DivisionCheck:
    """Divide ``char_poly(dom)`` by ``char_poly(cod)`` for a node-surjective Covering."""
    from .classify import is_covering

    if not is_covering(f):
        raise PreconditionError("morphism is not a Covering")
    if len(set(f.node_map)) != f.cod.n_nodes:
        raise PreconditionError("Covering is not surjective on nodes")
    q, r = divmod(char_poly(f.dom), char_poly(f.cod))
    return DivisionCheck(not r, q, r)


def check_acyclic_preserves_zeta(f: GraphMorphism, m: int = 10) -> bool:
    from .classify import is_acyclic

    if not is_acyclic(f):
        raise PreconditionError("morphism is not Acyclic")
    return zeta_series(f.dom, m) == zeta_series(f.cod, m)
