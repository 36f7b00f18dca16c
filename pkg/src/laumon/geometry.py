"""Torus fixed points of affine Laumon spaces, their RHom characters, and Z(m) by localization.

A fixed point is a collection of n columns.  Column l (1 <= l <= n) holds the
weakly decreasing positive entries d_{l,l} >= d_{l+1,l} >= ..., and all other
entries follow from the periodic rule d_{r+n,l+n} = d_{r,l}.  The degree
component d_k is the sum of the entries lying in rows r = k mod n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from laumon.errors import DimensionError, NonGenericParametersError
from laumon.series import (
    Exponent,
    ScalarLike,
    TruncatedSeries,
    exponents_of_degree,
    format_scalar,
    parse_scalar,
)


@dataclass(frozen=True)
class EquivParams:
    """Equivariant parameters in units of the first loop weight: xi_i, eta and the mass m."""

    n: int
    xi: tuple[Fraction, ...]
    eta: Fraction
    m: Fraction = Fraction(0)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("rank must be at least 1")
        xi = tuple(parse_scalar(x) for x in self.xi)
        if len(xi) != self.n:
            raise DimensionError(f"expected {self.n} framing parameters, got {len(xi)}")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", parse_scalar(self.eta))
        object.__setattr__(self, "m", parse_scalar(self.m))

    def with_m(self, m: ScalarLike) -> EquivParams:
        return EquivParams(self.n, self.xi, self.eta, parse_scalar(m))

    @property
    def central_charge(self) -> Fraction:
        return -self.n - self.eta

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "xi": [format_scalar(x) for x in self.xi],
            "eta": format_scalar(self.eta),
            "m": format_scalar(self.m),
        }


CALOGERO_VARIANTS = ("A", "B", "C")


@dataclass(frozen=True)
class Conventions:
    """The finite set of sign and assignment choices that the formulas leave implicit.

    swap_q:        False reads q as the unit weight and q' as the eta weight; True swaps them.
    shift_sign:    sign s in t_l = t_{l0} (q')^{s * floor((l - l0)/n)}.
    dualize:       read the tangent weights with the opposite sign.
    qprime_scale:  the q' weight is qprime_scale * eta (1 or n).
    variant:       which Calogero-Moser operator is used (see laumon.calogero).
    """

    swap_q: bool = False
    shift_sign: int = 1
    dualize: bool = False
    qprime_scale: str = "n"
    variant: str = "C"

    def __post_init__(self):
        if self.shift_sign not in (1, -1):
            raise ValueError("shift_sign must be +1 or -1")
        if self.qprime_scale not in ("1", "n"):
            raise ValueError("qprime_scale must be '1' or 'n'")
        if self.variant not in CALOGERO_VARIANTS:
            raise ValueError(f"unknown calogero variant {self.variant!r}")

    def q_weights(self, params: EquivParams) -> tuple[Fraction, Fraction]:
        """The (q, q') weights in units of the first loop weight."""
        pair = (Fraction(1), self.geometric_eta(params))
        return (pair[1], pair[0]) if self.swap_q else pair

    def geometric_eta(self, params: EquivParams) -> Fraction:
        """The loop-rotation weight seen by the fixed points and by the Verma module."""
        return (params.n if self.qprime_scale == "n" else 1) * params.eta

    def label(self) -> str:
        return (
            f"swap_q={int(self.swap_q)},shift_sign={self.shift_sign},dualize={int(self.dualize)},"
            f"qprime_scale={self.qprime_scale},variant={self.variant}"
        )

    def to_dict(self) -> dict:
        return {
            "swap_q": self.swap_q,
            "shift_sign": self.shift_sign,
            "dualize": self.dualize,
            "qprime_scale": self.qprime_scale,
            "variant": self.variant,
        }

    @classmethod
    def parse(cls, text: str) -> Conventions:
        """Parse ``key=value`` pairs separated by commas, e.g. ``variant=A,shift_sign=-1``."""
        kwargs: dict = {}
        for item in filter(None, (p.strip() for p in text.split(","))):
            key, _, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if key in ("swap_q", "dualize"):
                kwargs[key] = value.lower() in ("1", "true", "yes")
            elif key == "shift_sign":
                kwargs[key] = int(value)
            elif key in ("qprime_scale", "variant"):
                kwargs[key] = value
            else:
                raise ValueError(f"unknown ledger key {key!r}")
        return cls(**kwargs)


DEFAULT_CONVENTIONS = Conventions()


@dataclass(frozen=True)
class FixedPoint:
    n: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cols = tuple(tuple(int(e) for e in c if e) for c in self.columns)
        if len(cols) != self.n:
            raise DimensionError(f"expected {self.n} columns, got {len(cols)}")
        for c in cols:
            if any(e < 0 for e in c) or any(a < b for a, b in zip(c, c[1:])):
                raise ValueError(f"column {c} is not weakly decreasing and non-negative")
        object.__setattr__(self, "columns", cols)

    def entry(self, r: int, l: int) -> int:
        """d_{r,l} for arbitrary integers, via d_{r+n,l+n} = d_{r,l}."""
        l0 = (l - 1) % self.n + 1
        idx = r + (l0 - l) - l0
        col = self.columns[l0 - 1]
        if idx < 0 or idx >= len(col):
            return 0
        return col[idx]

    @property
    def size(self) -> int:
        return sum(sum(c) for c in self.columns)

    @property
    def depth(self) -> int:
        return max((len(c) for c in self.columns), default=0)

    def to_dict(self) -> dict:
        return {"columns": [list(c) for c in self.columns]}

    @classmethod
    def from_dict(cls, data: dict) -> FixedPoint:
        cols = data["columns"]
        return cls(len(cols), tuple(tuple(c) for c in cols))


def fixed_point_degree(fp: FixedPoint) -> Exponent:
    d = [0] * fp.n
    for l, col in enumerate(fp.columns, start=1):
        for offset, e in enumerate(col):
            d[(l + offset - 1) % fp.n] += e
    return tuple(d)


def _columns_with_sum_at_most(total: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]

    def rec(prefix: tuple[int, ...], left: int, cap: int) -> None:
        for part in range(1, min(left, cap) + 1):
            nxt = prefix + (part,)
            out.append(nxt)
            rec(nxt, left - part, part)

    rec((), total, total)
    return out


def enumerate_fixed_points(n: int, d: Sequence[int]) -> list[FixedPoint]:
    d = tuple(d)
    if len(d) != n:
        raise DimensionError(f"degree vector has length {len(d)}, expected {n}")
    if any(x < 0 for x in d):
        return []
    total = sum(d)
    cols = _columns_with_sum_at_most(total)
    found: list[FixedPoint] = []

    def rec(chosen: list[tuple[int, ...]], used: int) -> None:
        if len(chosen) == n:
            fp = FixedPoint(n, tuple(chosen))
            if fixed_point_degree(fp) == d:
                found.append(fp)
            return
        for c in cols:
            s = sum(c)
            if used + s <= total:
                rec(chosen + [c], used + s)

    rec([], 0)
    return found


@dataclass
class CharacterPolynomial:
    """Integer Laurent polynomial in t_1..t_n, q, q'; keys are (t exponents, q exponent, q' exponent)."""

    n: int
    terms: dict[tuple[tuple[int, ...], int, int], int] = field(default_factory=dict)

    def add(self, tvec: tuple[int, ...], a: int, b: int, coeff: int) -> None:
        key = (tvec, a, b)
        value = self.terms.get(key, 0) + coeff
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def __neg__(self) -> CharacterPolynomial:
        return CharacterPolynomial(self.n, {k: -v for k, v in self.terms.items()})

    def __add__(self, other: CharacterPolynomial) -> CharacterPolynomial:
        out = CharacterPolynomial(self.n, dict(self.terms))
        for (t, a, b), v in other.terms.items():
            out.add(t, a, b, v)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharacterPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def mass(self) -> int:
        return sum(self.terms.values())

    def to_records(self) -> list[dict]:
        return [
            {"t": list(t), "q": a, "qp": b, "c": c}
            for (t, a, b), c in sorted(self.terms.items())
        ]


def rhom_character(n: int, fp_a: FixedPoint, fp_b: FixedPoint, shift_sign: int = 1) -> CharacterPolynomial:
    """The RHom character with fp_a giving the unprimed entries d and fp_b the primed entries d'.

    chi = - sum_k sum_{l<=k}   t_l/t_k   (q^{-d'_{kl}} - 1)/(q^{-1} - 1)
          - sum_k sum_{l'<=k-1} t_k/t_l' (q^{d_{k-1,l'}+1} - q)/(q - 1)
          - sum_k sum_{l<=k, l'<=k-1} t_l/t_l' (q^{d_{k-1,l'}+1} - q)(q^{-d'_{kl}} - 1)/(q - 1)
          + sum_k sum_{l<=k, l'<=k}   t_l/t_l' (q^{d_{k,l'}+1} - q)(q^{-d'_{kl}} - 1)/(q - 1)

    Every quotient is a finite geometric sum, and a summand vanishes as soon
    as its d-entry is zero, so the ranges in l, l' are finite.
    """
    if fp_a.n != n or fp_b.n != n:
        raise DimensionError("fixed points of different rank")
    chi = CharacterPolynomial(n)
    reach = max(fp_a.depth, fp_b.depth) + 1

    def reduce(l: int) -> tuple[int, int]:
        l0 = (l - 1) % n + 1
        return l0, shift_sign * ((l - l0) // n)

    def ratio(num: int, den: int) -> tuple[tuple[int, ...], int]:
        a0, ea = reduce(num)
        b0, eb = reduce(den)
        t = [0] * n
        t[a0 - 1] += 1
        t[b0 - 1] -= 1
        return tuple(t), ea - eb

    for k in range(1, n + 1):
        ls = range(k - reach, k + 1)
        lps_prev = range(k - 1 - reach, k)
        for l in ls:
            dp = fp_b.entry(k, l)
            if dp:
                t, b = ratio(l, k)
                for i in range(dp):
                    chi.add(t, -i, b, -1)
        for lp in lps_prev:
            d = fp_a.entry(k - 1, lp)
            if d:
                t, b = ratio(k, lp)
                for i in range(1, d + 1):
                    chi.add(t, i, b, -1)
        for l in ls:
            dp = fp_b.entry(k, l)
            if not dp:
                continue
            # (sum_{i=1}^{d} q^i)(q^{-d'} - 1)
            for lp in lps_prev:
                d = fp_a.entry(k - 1, lp)
                if d:
                    t, b = ratio(l, lp)
                    for i in range(1, d + 1):
                        chi.add(t, i - dp, b, -1)
                        chi.add(t, i, b, 1)
            for lp in ls:
                d = fp_a.entry(k, lp)
                if d:
                    t, b = ratio(l, lp)
                    for i in range(1, d + 1):
                        chi.add(t, i - dp, b, 1)
                        chi.add(t, i, b, -1)
    return chi


def tangent_character(fp: FixedPoint, conventions: Conventions = DEFAULT_CONVENTIONS) -> CharacterPolynomial:
    return -rhom_character(fp.n, fp, fp, conventions.shift_sign)


def tangent_weights(
    n: int, fp: FixedPoint, params: EquivParams, conventions: Conventions = DEFAULT_CONVENTIONS
) -> list[Fraction]:
    """Tangent weights (with multiplicity) at a fixed point, in units of the first loop weight."""
    if params.n != n or fp.n != n:
        raise DimensionError("rank mismatch")
    chi = tangent_character(fp, conventions)
    wq, wqp = conventions.q_weights(params)
    sign = -1 if conventions.dualize else 1
    weights: list[Fraction] = []
    for (t, a, b), coeff in sorted(chi.terms.items()):
        if coeff <= 0:
            raise NonGenericParametersError(
                f"tangent character at {fp.to_dict()} has coefficient {coeff} at t={t}, q^{a}, q'^{b}",
                degree=fixed_point_degree(fp),
            )
        w = sum((u * x for u, x in zip(t, params.xi)), Fraction(0)) + a * wq + b * wqp
        if w == 0:
            raise NonGenericParametersError(
                f"zero tangent weight at {fp.to_dict()}", degree=fixed_point_degree(fp)
            )
        weights.extend([sign * w] * coeff)
    return weights


def fixed_point_contribution(
    fp: FixedPoint, params: EquivParams, conventions: Conventions = DEFAULT_CONVENTIONS
) -> Fraction:
    """prod (w + m)/w over the tangent weights."""
    out = Fraction(1)
    for w in tangent_weights(fp.n, fp, params, conventions):
        out *= (w + params.m) / w
    return out


def localization_coefficient(
    params: EquivParams, d: Sequence[int], conventions: Conventions = DEFAULT_CONVENTIONS
) -> Fraction:
    return sum(
        (fixed_point_contribution(fp, params, conventions) for fp in enumerate_fixed_points(params.n, d)),
        Fraction(0),
    )


def localization_partition_function(
    params: EquivParams, bound: int, conventions: Conventions = DEFAULT_CONVENTIONS
) -> TruncatedSeries:
    terms = {}
    for degree in range(bound + 1):
        for d in exponents_of_degree(params.n, degree):
            terms[d] = localization_coefficient(params, d, conventions)
    return TruncatedSeries(params.n, bound, terms)


def fixed_point_counts(n: int, bound: int) -> TruncatedSeries:
    terms = {}
    for degree in range(bound + 1):
        for d in exponents_of_degree(n, degree):
            terms[d] = len(enumerate_fixed_points(n, d))
    return TruncatedSeries(n, bound, terms)


def brute_force_fixed_points(n: int, d: Sequence[int]) -> list[FixedPoint]:
    """Independent oracle: all tableaux with entries <= |d| and at most |d| nonzero rows per column."""
    total = sum(d)
    col_options: list[tuple[int, ...]] = []
    for length in range(total + 1):
        for entries in product(range(1, total + 1), repeat=length):
            if all(a >= b for a, b in zip(entries, entries[1:])) and sum(entries) <= total:
                col_options.append(entries)
    out = []
    for cols in product(col_options, repeat=n):
        fp = FixedPoint(n, cols)
        if fixed_point_degree(fp) == tuple(d):
            out.append(fp)
    return out


__all__ = [
    "CALOGERO_VARIANTS",
    "CharacterPolynomial",
    "Conventions",
    "DEFAULT_CONVENTIONS",
    "EquivParams",
    "FixedPoint",
    "brute_force_fixed_points",
    "enumerate_fixed_points",
    "fixed_point_contribution",
    "fixed_point_counts",
    "fixed_point_degree",
    "localization_coefficient",
    "localization_partition_function",
    "rhom_character",
    "tangent_character",
    "tangent_weights",
]
