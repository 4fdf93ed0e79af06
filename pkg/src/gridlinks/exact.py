"""Exact counts of grid diagrams by number of components.

Notation: ``c(n)`` is the number of valid n x n diagrams, ``c(n, k)`` those
with k components, and ``cbar = c / (n! n!)`` the normalized versions. Three
independent routes produce ``cbar(n, k)``:

* a recurrence in n, ``cbar(n, k) = (1/n) * sum_{i=1}^{n-2} cbar(i, k-1)``;
* a sum over cycle types with every part at least 2;
* coefficient extraction from ``(-log(1 - x) - x)**k / k!``.

Everything stays in :class:`fractions.Fraction` until a caller asks for a
decimal.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

from gridlinks.errors import TruncationTooSmall


@lru_cache(maxsize=None)
def subfactorial(n: int) -> int:
    """Number of derangements of n items."""
    if n < 0:
        raise ValueError("n must be non-negative")
    d = 1
    for i in range(1, n + 1):
        d = i * d + (-1) ** i
    return d


def count_links(n: int) -> int:
    return factorial(n) * subfactorial(n)


def count_knots(n: int) -> int:
    return factorial(n) * factorial(n - 1)


def cbar_links(n: int) -> Fraction:
    """``sum_{i=0}^n (-1)^i / i!``, which tends to 1/e."""
    return sum((Fraction((-1) ** i, factorial(i)) for i in range(n + 1)), Fraction(0))


def cbar_knots(n: int) -> Fraction:
    return Fraction(1, n) if n >= 2 else Fraction(0)


# -- truncated power series ------------------------------------------------


class SeriesQ:
    """Power series with Fraction coefficients, known exactly through x**order."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        c = [Fraction(v) for v in coeffs[: order + 1]]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.coeffs = tuple(c)
        self.order = order

    @classmethod
    def constant(cls, value, order: int) -> SeriesQ:
        return cls([value], order)

    @classmethod
    def from_function(cls, term, order: int) -> SeriesQ:
        return cls([term(i) for i in range(order + 1)], order)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        return f"SeriesQ([{shown}{', ...' if self.order > 5 else ''}], order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, SeriesQ):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficient(i)

    def coefficient(self, i: int) -> Fraction:
        if i < 0:
            raise IndexError(i)
        if i > self.order:
            raise TruncationTooSmall(f"coefficient of x^{i} requested from a series known to order {self.order}")
        return self.coeffs[i]

    def _coerce(self, other) -> SeriesQ:
        if isinstance(other, SeriesQ):
            return other
        return SeriesQ.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        m = min(self.order, other.order)
        return SeriesQ([a + b for a, b in zip(self.coeffs[: m + 1], other.coeffs[: m + 1])], m)

    __radd__ = __add__

    def __neg__(self):
        return SeriesQ([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, SeriesQ):
            v = Fraction(other)
            return SeriesQ([a * v for a in self.coeffs], self.order)
        m = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for i in range(m + 1):
            out.append(sum((a[j] * b[i - j] for j in range(i + 1) if a[j] and b[i - j]), Fraction(0)))
        return SeriesQ(out, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SeriesQ):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = SeriesQ.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> SeriesQ:
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        out = [1 / a[0]]
        for i in range(1, self.order + 1):
            out.append(-sum((a[j] * out[i - j] for j in range(1, i + 1)), Fraction(0)) / a[0])
        return SeriesQ(out, self.order)

    def derivative(self) -> SeriesQ:
        if self.order == 0:
            raise TruncationTooSmall("derivative of an order-0 series is unknown")
        return SeriesQ([i * self.coeffs[i] for i in range(1, self.order + 1)], self.order - 1)

    def integral(self) -> SeriesQ:
        """Antiderivative with zero constant term; gains one order."""
        return SeriesQ([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)], self.order + 1)

    def exp(self) -> SeriesQ:
        """exp of a series with zero constant term, via E' = f' E."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term to stay rational")
        a = self.coeffs
        e = [Fraction(1)]
        for i in range(1, self.order + 1):
            e.append(sum((j * a[j] * e[i - j] for j in range(1, i + 1)), Fraction(0)) / i)
        return SeriesQ(e, self.order)

    def log(self) -> SeriesQ:
        """log of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        if self.order == 0:
            return SeriesQ([0], 0)
        q = self.derivative() * self.inverse()
        return q.integral()


def log_tail_series(order: int) -> SeriesQ:
    """``-log(1 - x) - x = sum_{i>=2} x**i / i``."""
    return SeriesQ.from_function(lambda i: Fraction(1, i) if i >= 2 else Fraction(0), order)


def links_series(order: int) -> SeriesQ:
    """``(1 - x)**-1 * exp(-x)``, whose coefficients are ``cbar_links``."""
    ones = SeriesQ([1] * (order + 1), order)
    alt = SeriesQ.from_function(lambda i: Fraction((-1) ** i, factorial(i)), order)
    return ones * alt


@lru_cache(maxsize=64)
def _fixed_k_series(k: int, order: int) -> SeriesQ:
    return log_tail_series(order) ** k * Fraction(1, factorial(k))


def cbar_series(n: int, k: int, order: int | None = None) -> Fraction:
    """Coefficient of x**n in ``(-log(1 - x) - x)**k / k!``."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if order is None:
        order = n + 1
    return _fixed_k_series(k, order).coefficient(n)


# -- cycle-type sum ----------------------------------------------------------


def partitions_min2(n: int, k: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n into exactly k parts, each at least 2, parts non-increasing."""
    if largest is None:
        largest = n
    if k == 0:
        if n == 0:
            yield ()
        return
    if n < 2 * k:
        return
    for part in range(min(largest, n - 2 * (k - 1)), 1, -1):
        for rest in partitions_min2(n - part, k - 1, part):
            yield (part,) + rest


def cbar_partition(n: int, k: int) -> Fraction:
    """``sum 1 / (prod_i i**e_i * prod_i e_i!)`` over part multiplicities e_i."""
    total = Fraction(0)
    for parts in partitions_min2(n, k):
        denom = 1
        mult: dict[int, int] = {}
        for p in parts:
            denom *= p
            mult[p] = mult.get(p, 0) + 1
        for e in mult.values():
            denom *= factorial(e)
        total += Fraction(1, denom)
    return total


# -- recurrence table --------------------------------------------------------


@dataclass
class CountTable:
    n_max: int
    k_max: int
    cbar: dict[tuple[int, int], Fraction] = field(repr=False)

    def cbar_nk(self, n: int, k: int) -> Fraction:
        if k > self.k_max or n > self.n_max:
            raise KeyError((n, k))
        return self.cbar.get((n, k), Fraction(0))

    def c(self, n: int, k: int) -> int:
        v = self.cbar_nk(n, k) * factorial(n) ** 2
        if v.denominator != 1:
            raise ArithmeticError(f"c({n},{k}) is not integral: {v}")
        return v.numerator

    def c_total(self, n: int) -> int:
        return sum(self.c(n, k) for k in range(1, self.k_max + 1))

    def is_complete(self, n: int) -> bool:
        return self.k_max >= n // 2

    def distribution(self, n: int) -> dict[int, Fraction]:
        """Pr(k components) for uniform n x n diagrams."""
        if not self.is_complete(n):
            raise ValueError(f"k_max={self.k_max} does not cover every k for n={n}")
        row = {k: self.cbar_nk(n, k) for k in range(1, n // 2 + 1)}
        total = sum(row.values(), Fraction(0))
        return {k: v / total for k, v in row.items()}

    def moments(self, n: int) -> tuple[Fraction, Fraction]:
        """Mean and variance of the component count, from the table row."""
        dist = self.distribution(n)
        m1 = sum((k * p for k, p in dist.items()), Fraction(0))
        m2 = sum((k * k * p for k, p in dist.items()), Fraction(0))
        return m1, m2 - m1 * m1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "c_nk", "cbar_num", "cbar_den"])
        for n in range(2, self.n_max + 1):
            for k in range(1, min(self.k_max, n // 2) + 1):
                v = self.cbar_nk(n, k)
                w.writerow([n, k, self.c(n, k), v.numerator, v.denominator])
        return buf.getvalue()


def cbar_table_recurrence(n_max: int, k_max: int | None = None) -> CountTable:
    """Fill cbar(n, k) for n <= n_max, k <= k_max (default: every k that can occur)."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if k_max is None:
        k_max = n_max // 2
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    cbar: dict[tuple[int, int], Fraction] = {}
    for n in range(2, n_max + 1):
        cbar[n, 1] = Fraction(1, n)
    for k in range(2, k_max + 1):
        # running = sum_{i=1}^{n-2} cbar(i, k-1)
        running = Fraction(0)
        for n in range(2 * k, n_max + 1):
            running += cbar.get((n - 2, k - 1), Fraction(0))
            if running:
                cbar[n, k] = running / n
    return CountTable(n_max, k_max, cbar)


# -- harmonic-number moments ------------------------------------------------


class HarmonicTable:
    """Generalized harmonic numbers ``H(n, m) = sum_{i=1}^n i**-m``, m in {1, 2}."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        h1 = [Fraction(0)]
        h2 = [Fraction(0)]
        for i in range(1, n_max + 1):
            h1.append(h1[-1] + Fraction(1, i))
            h2.append(h2[-1] + Fraction(1, i * i))
        self._h = {1: h1, 2: h2}

    def __call__(self, n: int, m: int = 1) -> Fraction:
        return self._h[m][n]


def expected_components(n: int, harmonic: HarmonicTable | None = None) -> Fraction:
    """Mean component count of a uniform n x n diagram, from harmonic numbers."""
    if n < 2:
        raise ValueError("n must be at least 2")
    H = harmonic or HarmonicTable(n)
    s = sum((Fraction((-1) ** i, factorial(i)) * (H(n - i) - 1) for i in range(n)), Fraction(0))
    return s / cbar_links(n)


def shifted_second_moment(n: int, harmonic: HarmonicTable | None = None) -> Fraction:
    """``E[k^2] - 2 E[k]`` for the component count k.

    This is what ``(1/cbar_n) * sum_{i=0}^n (-1)^i (H_{n-i}^2 - H_{n-i,2}
    + (2i-1) H_{n-i} + i(i-2)) / i!`` evaluates to: the factorial moment
    E[k(k-1)] minus E[k]. It is not the variance.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    H = harmonic or HarmonicTable(n)
    s = Fraction(0)
    for i in range(n + 1):
        h = H(n - i)
        s += Fraction((-1) ** i, factorial(i)) * (h * h - H(n - i, 2) + (2 * i - 1) * h + i * (i - 2))
    return s / cbar_links(n)


def variance_components(n: int, harmonic: HarmonicTable | None = None) -> Fraction:
    """Variance of the component count: ``E[k^2] - E[k]^2`` from the harmonic sums."""
    H = harmonic or HarmonicTable(n)
    ev = expected_components(n, H)
    return shifted_second_moment(n, H) + 2 * ev - ev * ev


def cbar_row_polynomial(n: int) -> list[Fraction]:
    """Coefficients of ``sum_i (-1)^i C(y+n-i-1, y-1) y^i / i!`` in y.

    Entry k is cbar(n, k); built from rising factorials, independent of the
    three routes above.
    """
    out = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        m = n - i
        # C(y+m-1, m) = y (y+1) ... (y+m-1) / m!
        poly = [Fraction(1)]
        for j in range(m):
            nxt = [Fraction(0)] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d] += c * j
                nxt[d + 1] += c
            poly = nxt
        scale = Fraction((-1) ** i, factorial(i) * factorial(m))
        for d, c in enumerate(poly):
            out[d + i] += c * scale
    return out


# -- closing-knot size -------------------------------------------------------


@dataclass(frozen=True)
class KnotSizeDistribution:
    n: int

    @property
    def p(self) -> dict[int, Fraction]:
        return {s: Fraction(1, self.n - 1) for s in range(2, self.n + 1)}

    @property
    def ev(self) -> Fraction:
        return Fraction(self.n, 2) + 1

    @property
    def var(self) -> Fraction:
        return Fraction(self.n * self.n - 2 * self.n, 12)

    def moment(self, k: int) -> Fraction:
        """Raw moment ``E[s**k]``."""
        return Fraction(sum(i**k for i in range(2, self.n + 1)), self.n - 1)


def knot_size_distribution(n: int) -> KnotSizeDistribution:
    if n < 2:
        raise ValueError("n must be at least 2")
    return KnotSizeDistribution(n)


# -- bound -------------------------------------------------------------------

BOUND_DIGITS = 60


def _to_decimal(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def bound_margin(n: int, k: int, cbar_nk: Fraction | None = None) -> Fraction | Decimal:
    """``(log2 n)**(k-1) / n - cbar(n, k)``; non-negative by the component bound.

    Exact (a Fraction) when log2 n is rational in play, i.e. k = 1 or n a power
    of two; otherwise a Decimal carried to ``BOUND_DIGITS`` significant digits.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    if cbar_nk is None:
        cbar_nk = cbar_series(n, k)
    if k == 1:
        return Fraction(1, n) - cbar_nk
    if n & (n - 1) == 0:
        return Fraction(n.bit_length() - 1) ** (k - 1) / n - cbar_nk
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        lg = Decimal(n).ln() / Decimal(2).ln()
        return lg ** (k - 1) / n - _to_decimal(cbar_nk)


def inverse_e_interval(digits: int = 120) -> tuple[Fraction, Fraction]:
    """Rational interval guaranteed to contain 1/e.

    Decimal's exp is correctly rounded, so one unit in the last place on each
    side is a safe enclosure.
    """
    with localcontext() as ctx:
        ctx.prec = digits
        x = Decimal(-1).exp()
        ulp = Decimal(1).scaleb(x.adjusted() - digits + 1)
        return Fraction(x - ulp), Fraction(x + ulp)


def vanishing_threshold(k: int, eps: Fraction, n_limit: int) -> int | None:
    """Smallest n with Pr(k components | m) < eps for every m in n..n_limit."""
    table = cbar_table_recurrence(n_limit, k)
    cbars = [Fraction(0)] * (n_limit + 1)
    running = Fraction(0)
    for m in range(n_limit + 1):
        running += Fraction((-1) ** m, factorial(m))
        cbars[m] = running
    threshold = None
    for m in range(n_limit, 1, -1):
        if table.cbar_nk(m, k) / cbars[m] >= eps:
            break
        threshold = m
    return threshold


def summary_rows(n_values: Sequence[int], k_max: int) -> list[dict]:
    """Per-n exact summary: counts, component mean/variance, smallest bound margin."""
    n_top = max(n_values)
    table = cbar_table_recurrence(n_top, max(k_max, 1))
    H = HarmonicTable(n_top)
    rows = []
    for n in n_values:
        ev = expected_components(n, H)
        var = variance_components(n, H)
        margins = [bound_margin(n, k, table.cbar_nk(n, k)) for k in range(1, k_max + 1)]
        rows.append(
            {
                "n": n,
                "c_n": count_links(n),
                "c_nk": [table.c(n, k) for k in range(1, k_max + 1)],
                "ev": ev,
                "var": var,
                "cbar_n": cbar_links(n),
                "min_bound_margin": min(margins),
            }
        )
    return rows

