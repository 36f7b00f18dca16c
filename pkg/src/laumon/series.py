"""Exact rational scalars and sparse truncated power series in n variables.

Every coefficient is a :class:`fractions.Fraction`.  A :class:`TruncatedSeries`
keeps only monomials of total degree at most ``bound`` and never stores a zero
coefficient, so two series are equal exactly when their term maps are equal.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from laumon.errors import DimensionError, NormalizationError, NotAUnitError, WindowIndexError

ExactScalar = Fraction
Exponent = tuple[int, ...]
ScalarLike = Union[int, Fraction, str]


def parse_scalar(value: ScalarLike) -> Fraction:
    """Read an int, Fraction or a ``"p/q"`` string as an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_scalar(value: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def exponents_of_degree(n: int, degree: int) -> Iterator[Exponent]:
    """All exponent vectors of length n with the given total degree."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in exponents_of_degree(n - 1, degree - first):
            yield (first,) + rest


def exponents_up_to(n: int, bound: int) -> Iterator[Exponent]:
    for degree in range(bound + 1):
        yield from exponents_of_degree(n, degree)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class TruncatedSeries:
    """A power series in ``n`` variables known through total degree ``bound``."""

    __slots__ = ("n", "bound", "_terms", "_hash")

    def __init__(self, n: int, bound: int, terms: Mapping[Exponent, ScalarLike] | None = None):
        if n < 1:
            raise DimensionError("a series needs at least one variable")
        if bound < 0:
            raise DimensionError("truncation bound must be non-negative")
        self.n = n
        self.bound = bound
        clean: dict[Exponent, Fraction] = {}
        for exp, value in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or min(exp) < 0:
                raise DimensionError(f"exponent {exp} does not fit {n} variables")
            if sum(exp) > bound:
                continue
            value = parse_scalar(value)
            if value:
                clean[exp] = clean.get(exp, Fraction(0)) + value
        self._terms = {e: v for e, v in clean.items() if v}
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, n: int, bound: int) -> TruncatedSeries:
        return cls(n, bound)

    @classmethod
    def one(cls, n: int, bound: int) -> TruncatedSeries:
        return cls(n, bound, {(0,) * n: 1})

    @classmethod
    def monomial(cls, n: int, bound: int, exp: Exponent, coeff: ScalarLike = 1) -> TruncatedSeries:
        return cls(n, bound, {tuple(exp): coeff})

    @classmethod
    def _trusted(cls, n: int, bound: int, terms: dict[Exponent, Fraction]) -> TruncatedSeries:
        out = object.__new__(cls)
        out.n = n
        out.bound = bound
        out._terms = terms
        out._hash = None
        return out

    # inspection -------------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    __getitem__ = coefficient

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.n)

    def is_zero(self) -> bool:
        return not self._terms

    def homogeneous(self, degree: int) -> dict[Exponent, Fraction]:
        return {e: v for e, v in self._terms.items() if sum(e) == degree}

    def truncate(self, bound: int) -> TruncatedSeries:
        """Drop everything above ``bound``; never raises the known precision."""
        bound = min(bound, self.bound)
        return TruncatedSeries._trusted(
            self.n, bound, {e: v for e, v in self._terms.items() if sum(e) <= bound}
        )

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.n == other.n and self.bound == other.bound and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.bound, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            body = "0"
        else:
            body = " + ".join(
                f"{format_scalar(v)}*z^{list(e)}" for e, v in sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]))
            )
        return f"TruncatedSeries(n={self.n}, bound={self.bound}: {body})"

    # arithmetic -------------------------------------------------------------

    def _check(self, other: TruncatedSeries) -> None:
        if self.n != other.n or self.bound != other.bound:
            raise DimensionError(
                f"mismatched series: n={self.n}, D={self.bound} vs n={other.n}, D={other.bound}"
            )

    def __add__(self, other: TruncatedSeries | ScalarLike) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.one(self.n, self.bound) * parse_scalar(other)
        self._check(other)
        out = dict(self._terms)
        for e, v in other._terms.items():
            s = out.get(e, 0) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncatedSeries._trusted(self.n, self.bound, out)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._trusted(self.n, self.bound, {e: -v for e, v in self._terms.items()})

    def __sub__(self, other: TruncatedSeries | ScalarLike) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.one(self.n, self.bound) * parse_scalar(other)
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> TruncatedSeries:
        return (-self) + other

    def scale(self, factor: ScalarLike) -> TruncatedSeries:
        factor = parse_scalar(factor)
        if not factor:
            return TruncatedSeries.zero(self.n, self.bound)
        return TruncatedSeries._trusted(self.n, self.bound, {e: v * factor for e, v in self._terms.items()})

    def __mul__(self, other: TruncatedSeries | ScalarLike) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        bound = self.bound
        acc: dict[Exponent, Fraction] = defaultdict(Fraction)
        right = [(e, sum(e), v) for e, v in other._terms.items()]
        for e1, v1 in self._terms.items():
            d1 = sum(e1)
            for e2, d2, v2 in right:
                if d1 + d2 <= bound:
                    acc[_add_exp(e1, e2)] += v1 * v2
        return TruncatedSeries._trusted(self.n, bound, {e: v for e, v in acc.items() if v})

    def __rmul__(self, other: ScalarLike) -> TruncatedSeries:
        return self.scale(other)

    def __pow__(self, k: int) -> TruncatedSeries:
        if not isinstance(k, int):
            return series_pow_rational(self, k)
        if k < 0:
            return series_inv(self) ** (-k)
        out = TruncatedSeries.one(self.n, self.bound)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, exp: Exponent, coeff: ScalarLike = 1) -> TruncatedSeries:
        """Multiply by the monomial ``coeff * z^exp``."""
        coeff = parse_scalar(coeff)
        return TruncatedSeries(self.n, self.bound, {_add_exp(e, exp): v * coeff for e, v in self._terms.items()})

    # serialization ----------------------------------------------------------

    def to_records(self) -> list[dict]:
        return [
            {"exponents": list(e), "value": format_scalar(v)} for e, v in sorted(self._terms.items())
        ]

    @classmethod
    def from_records(cls, n: int, bound: int, records: Iterable[Mapping]) -> TruncatedSeries:
        return cls(n, bound, {tuple(r["exponents"]): parse_scalar(r["value"]) for r in records})


def _by_degree(a: TruncatedSeries) -> list[list[tuple[Exponent, Fraction]]]:
    layers: list[list[tuple[Exponent, Fraction]]] = [[] for _ in range(a.bound + 1)]
    for e, v in a.items():
        layers[sum(e)].append((e, v))
    return layers


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through the truncation bound, built degree by degree."""
    c0 = a.constant_term
    if not c0:
        raise NotAUnitError("series has zero constant term")
    inv0 = 1 / c0
    layers = _by_degree(a)
    out_layers: list[dict[Exponent, Fraction]] = [{(0,) * a.n: inv0}]
    for degree in range(1, a.bound + 1):
        acc: dict[Exponent, Fraction] = defaultdict(Fraction)
        for k in range(1, degree + 1):
            for e1, v1 in layers[k]:
                for e2, v2 in out_layers[degree - k].items():
                    acc[_add_exp(e1, e2)] -= v1 * v2
        out_layers.append({e: v * inv0 for e, v in acc.items() if v})
    terms = {e: v for layer in out_layers for e, v in layer.items()}
    return TruncatedSeries._trusted(a.n, a.bound, terms)


def series_pow_rational(a: TruncatedSeries, alpha: ScalarLike) -> TruncatedSeries:
    """``a ** alpha`` for a series with constant term 1 and rational ``alpha``.

    Uses the Euler-operator identity ``E(f) * a = alpha * f * E(a)`` with
    ``E = sum z_k d/dz_k``, solved one total degree at a time.
    """
    alpha = parse_scalar(alpha)
    if a.constant_term != 1:
        raise NormalizationError("rational powers need constant term exactly 1")
    layers = _by_degree(a)
    out_layers: list[dict[Exponent, Fraction]] = [{(0,) * a.n: Fraction(1)}]
    for degree in range(1, a.bound + 1):
        acc: dict[Exponent, Fraction] = defaultdict(Fraction)
        for j in range(degree):
            k_deg = degree - j
            factor = alpha * k_deg - j
            if not factor:
                continue
            for e1, v1 in out_layers[j].items():
                for e2, v2 in layers[k_deg]:
                    acc[_add_exp(e1, e2)] += factor * v1 * v2
        out_layers.append({e: v / degree for e, v in acc.items() if v})
    terms = {e: v for layer in out_layers for e, v in layer.items()}
    return TruncatedSeries._trusted(a.n, a.bound, terms)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """Formal logarithm of a series with constant term 1 (Mercator series)."""
    if a.constant_term != 1:
        raise NormalizationError("log needs constant term exactly 1")
    x = a - 1
    out = TruncatedSeries.zero(a.n, a.bound)
    power = TruncatedSeries.one(a.n, a.bound)
    for k in range(1, a.bound + 1):
        power = power * x
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """Formal exponential of a series with zero constant term."""
    if a.constant_term:
        raise NormalizationError("exp needs zero constant term")
    out = TruncatedSeries.one(a.n, a.bound)
    term = TruncatedSeries.one(a.n, a.bound)
    for k in range(1, a.bound + 1):
        term = (term * a).scale(Fraction(1, k))
        out = out + term
    return out


class OffsetSeries:
    """``prod z_k^{offset_k} * body`` with a rational offset vector."""

    __slots__ = ("offset", "body")

    def __init__(self, offset: Iterable[ScalarLike], body: TruncatedSeries):
        self.offset = tuple(parse_scalar(b) for b in offset)
        if len(self.offset) != body.n:
            raise DimensionError("offset length must equal the number of variables")
        self.body = body

    @property
    def n(self) -> int:
        return self.body.n

    @property
    def bound(self) -> int:
        return self.body.bound

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OffsetSeries):
            return NotImplemented
        return self.offset == other.offset and self.body == other.body

    def __add__(self, other: OffsetSeries) -> OffsetSeries:
        if self.offset != other.offset:
            raise DimensionError("offset series with different offsets cannot be added")
        return OffsetSeries(self.offset, self.body + other.body)

    def __sub__(self, other: OffsetSeries) -> OffsetSeries:
        return self + other.scale(-1)

    def scale(self, factor: ScalarLike) -> OffsetSeries:
        return OffsetSeries(self.offset, self.body.scale(factor))

    def __repr__(self) -> str:
        return f"OffsetSeries(offset={[format_scalar(b) for b in self.offset]}, body={self.body!r})"


def window_monomial(n: int, i: int, j: int) -> Exponent:
    """Exponent of ``z_i z_{i+1} ... z_j`` with indices read mod n."""
    if not 1 <= i <= n:
        raise WindowIndexError(f"window start {i} outside 1..{n}")
    if j < i:
        raise WindowIndexError(f"window end {j} precedes start {i}")
    length = j - i + 1
    counts = [length // n] * n
    for k in range(i, i + length % n):
        counts[(k - 1) % n] += 1
    return tuple(counts)


def windows_up_to(n: int, max_length: int) -> Iterator[tuple[int, int]]:
    """Windows ``[i;j]`` with ``1 <= i <= n`` and length at most ``max_length``."""
    for length in range(1, max_length + 1):
        for i in range(1, n + 1):
            yield (i, i + length - 1)


def weyl_delta(n: int, bound: int) -> TruncatedSeries:
    """``prod_{i=1..n} prod_{j>=i} (1 - z^{[i;j]})`` through total degree ``bound``."""
    out = TruncatedSeries.one(n, bound)
    for i, j in windows_up_to(n, bound):
        factor = TruncatedSeries(n, bound, {(0,) * n: 1, window_monomial(n, i, j): -1})
        out = out * factor
    return out


def series_from_product(n: int, bound: int, factors: Iterable[tuple[Exponent, Fraction]]) -> TruncatedSeries:
    """Product of binomials ``(1 - z^e)^p`` given as ``(e, p)`` pairs."""
    out = TruncatedSeries.one(n, bound)
    for exp, power in factors:
        base = TruncatedSeries(n, bound, {(0,) * n: 1, exp: -1})
        out = out * series_pow_rational(base, power)
    return out


def all_monomials(n: int, bound: int) -> list[Exponent]:
    return list(exponents_up_to(n, bound))


def count_window_multisets(n: int, exp: Exponent) -> int:
    """Number of multisets of windows whose monomials sum to ``exp``; brute force."""
    total = sum(exp)
    windows = [window_monomial(n, i, j) for i, j in windows_up_to(n, total)]

    def rec(k: int, remaining: Exponent) -> int:
        if not any(remaining):
            return 1
        if k == len(windows):
            return 0
        w = windows[k]
        count = 0
        current = remaining
        while min(current) >= 0:
            count += rec(k + 1, current)
            current = tuple(x - y for x, y in zip(current, w))
        return count

    return rec(0, tuple(exp))


__all__ = [
    "ExactScalar",
    "OffsetSeries",
    "TruncatedSeries",
    "all_monomials",
    "count_window_multisets",
    "exponents_of_degree",
    "exponents_up_to",
    "format_scalar",
    "parse_scalar",
    "series_exp",
    "series_from_product",
    "series_inv",
    "series_log",
    "series_mul",
    "series_pow_rational",
    "weyl_delta",
    "window_monomial",
    "windows_up_to",
]
