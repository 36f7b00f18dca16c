"""Affine gl_n with its central extension, and the positive group P in window coordinates.

Loop-algebra basis elements are keys ``(a, r, s)`` meaning ``z^a E_{r,s}`` with
``1 <= r, s <= n``.  A window ``[i;j]`` (``i <= j``) labels the raising element

    e+_{[i;j]} = z^{floor(j/n) - floor((i-1)/n)} E_{i, j+1}

and the lowering element e-_{[i;j]} obtained by transposing and negating the
loop degree; indices are read mod n, and ``[i;j] = [i+n;j+n]``.

Group elements of P are stored by their matrix entries ``g_{[i;j]}`` for
windows up to a length bound, with the product rule

    (g g')_{[i;j]} = sum_{k=i}^{j+1} g_{[i;k-1]} g'_{[k;j]},   g_{[i;i-1]} = 1.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Union

from laumon.errors import DimensionError, WindowIndexError
from laumon.series import (
    TruncatedSeries,
    parse_scalar,
    series_inv,
    window_monomial,
    windows_up_to,
)

Key = tuple[int, int, int]
Window = tuple[int, int]
Entry = Union[Fraction, TruncatedSeries]


def residue(n: int, i: int) -> int:
    """Representative of i mod n in 1..n."""
    return (i - 1) % n + 1


def normalize_window(n: int, i: int, j: int) -> Window:
    if j < i:
        raise WindowIndexError(f"[{i};{j}] is not a window")
    shift = residue(n, i) - i
    return (i + shift, j + shift)


def window_length(window: Window) -> int:
    return window[1] - window[0] + 1


def window_order(window: Window) -> tuple[int, int]:
    """Canonical PBW order: by length, then by start index."""
    return (window_length(window), window[0])


def raising_key(n: int, i: int, j: int) -> Key:
    i, j = normalize_window(n, i, j)
    return (j // n, i, residue(n, j + 1))


def lowering_key(n: int, i: int, j: int) -> Key:
    i, j = normalize_window(n, i, j)
    return (-(j // n), residue(n, j + 1), i)


def classify(n: int, key: Key) -> tuple[str, object]:
    """Return ("lower", window), ("raise", window) or ("cartan", r) for a basis key."""
    a, r, s = key
    if a < 0 or (a == 0 and r > s):
        depth = -a
        return "lower", (s, r + depth * n - 1)
    if a > 0 or (a == 0 and r < s):
        return "raise", (r, s + a * n - 1)
    return "cartan", r


@dataclass(frozen=True)
class AlgebraElement:
    """Finite combination of ``z^a E_{rs}`` plus a multiple of the central element c."""

    n: int
    terms: Mapping[Key, Fraction] = field(default_factory=dict)
    central: Fraction = Fraction(0)

    def __post_init__(self):
        clean = {}
        for key, value in self.terms.items():
            value = parse_scalar(value)
            a, r, s = key
            if not (1 <= r <= self.n and 1 <= s <= self.n):
                raise DimensionError(f"matrix index out of range in {key}")
            if value:
                clean[key] = clean.get(key, Fraction(0)) + value
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})
        object.__setattr__(self, "central", parse_scalar(self.central))

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        terms = defaultdict(Fraction, self.terms)
        for key, value in other.terms.items():
            terms[key] += value
        return AlgebraElement(self.n, dict(terms), self.central + other.central)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + other.scale(-1)

    def __neg__(self) -> AlgebraElement:
        return self.scale(-1)

    def scale(self, factor) -> AlgebraElement:
        factor = parse_scalar(factor)
        return AlgebraElement(self.n, {k: v * factor for k, v in self.terms.items()}, self.central * factor)

    __rmul__ = scale

    def __mul__(self, factor) -> AlgebraElement:
        return self.scale(factor)

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def _check(self, other: AlgebraElement) -> None:
        if self.n != other.n:
            raise DimensionError("elements of different rank")

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items()), self.central))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms and self.central == other.central


def basis_bracket(n: int, x: Key, y: Key, trace_shift: Fraction = Fraction(0)) -> tuple[dict[Key, Fraction], Fraction]:
    """``[z^a E_{rs}, z^b E_{tu}]`` with cocycle ``a * delta_{a+b,0} * (tr(E_rs E_tu) + trace_shift * tr E_rs * tr E_tu) * c``.

    ``trace_shift = 0`` is the standard cocycle.
    """
    a, r, s = x
    b, t, u = y
    out: dict[Key, Fraction] = {}
    if s == t:
        out[(a + b, r, u)] = out.get((a + b, r, u), Fraction(0)) + 1
    if u == r:
        out[(a + b, t, s)] = out.get((a + b, t, s), Fraction(0)) - 1
    central = Fraction(0)
    if a + b == 0:
        if s == t and u == r:
            central += a
        if trace_shift and r == s and t == u:
            central += a * trace_shift
    return {k: v for k, v in out.items() if v}, central


def lie_bracket(x: AlgebraElement, y: AlgebraElement, trace_shift: Fraction = Fraction(0)) -> AlgebraElement:
    x._check(y)
    terms: dict[Key, Fraction] = defaultdict(Fraction)
    central = Fraction(0)
    for kx, vx in x.terms.items():
        for ky, vy in y.terms.items():
            part, cpart = basis_bracket(x.n, kx, ky, trace_shift)
            for k, v in part.items():
                terms[k] += vx * vy * v
            central += vx * vy * cpart
    return AlgebraElement(x.n, dict(terms), central)


# named elements -------------------------------------------------------------


def basis_element(n: int, key: Key, coeff=1) -> AlgebraElement:
    return AlgebraElement(n, {key: coeff})


def e_plus(n: int, i: int, j: int) -> AlgebraElement:
    return basis_element(n, raising_key(n, i, j))


def e_minus(n: int, i: int, j: int) -> AlgebraElement:
    return basis_element(n, lowering_key(n, i, j))


def h(n: int, i: int) -> AlgebraElement:
    """``h_i`` for any integer i, using ``h_{i+n} = h_i - c``."""
    i0 = residue(n, i)
    return AlgebraElement(n, {(0, i0, i0): 1}, Fraction(-((i - i0) // n)))


def central_element(n: int) -> AlgebraElement:
    return AlgebraElement(n, {}, 1)


def loop_plus(n: int, k: int) -> AlgebraElement:
    """``a+_k = sum_i e+_{[i;i+nk-1]} = z^k * Id``."""
    return AlgebraElement(n, {(k, r, r): 1 for r in range(1, n + 1)})


def loop_minus(n: int, k: int) -> AlgebraElement:
    return AlgebraElement(n, {(-k, r, r): 1 for r in range(1, n + 1)})


# the positive group P -------------------------------------------------------


def _entry_zero(like: Entry) -> Entry:
    if isinstance(like, TruncatedSeries):
        return TruncatedSeries.zero(like.n, like.bound)
    return Fraction(0)


def _is_zero(value: Entry) -> bool:
    if isinstance(value, TruncatedSeries):
        return value.is_zero()
    return value == 0


class GroupElement:
    """An element of P given by matrix entries ``g_{[i;j]}`` for windows of length <= ``bound``.

    Entries are exact rationals or truncated series; absent windows are zero.
    """

    def __init__(self, n: int, bound: int, entries: Mapping[Window, Entry] | None = None, zero: Entry = Fraction(0)):
        self.n = n
        self.bound = bound
        self.zero = zero
        clean: dict[Window, Entry] = {}
        for window, value in (entries or {}).items():
            window = normalize_window(n, *window)
            if window_length(window) > bound or _is_zero(value):
                continue
            clean[window] = value
        self.entries = clean

    @classmethod
    def identity(cls, n: int, bound: int, zero: Entry = Fraction(0)) -> GroupElement:
        return cls(n, bound, {}, zero)

    def entry(self, i: int, j: int) -> Entry:
        """``g_{[i;j]}``, including the convention ``g_{[i;i-1]} = 1``."""
        if j == i - 1:
            return self.zero + 1
        window = normalize_window(self.n, i, j)
        return self.entries.get(window, self.zero)

    def windows(self) -> list[Window]:
        return list(windows_up_to(self.n, self.bound))

    def _check(self, other: GroupElement) -> None:
        if self.n != other.n or self.bound != other.bound:
            raise DimensionError("group elements with different rank or bound")

    def __mul__(self, other: GroupElement) -> GroupElement:
        return group_multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return (
            self.n == other.n
            and self.bound == other.bound
            and all(self.entry(*w) == other.entry(*w) for w in self.windows())
        )

    def map_entries(self, fn: Callable[[Window, Entry], Entry]) -> GroupElement:
        return GroupElement(self.n, self.bound, {w: fn(w, self.entry(*w)) for w in self.windows()}, self.zero)

    def to_records(self) -> list[dict]:
        out = []
        for (i, j), value in sorted(self.entries.items(), key=lambda t: window_order(t[0])):
            payload = value.to_records() if isinstance(value, TruncatedSeries) else str(value)
            out.append({"window": {"i": i, "j": j}, "entry": payload})
        return out


def group_multiply(g: GroupElement, h_: GroupElement) -> GroupElement:
    g._check(h_)
    entries: dict[Window, Entry] = {}
    for i, j in g.windows():
        total = g.zero
        for k in range(i, j + 2):
            total = total + g.entry(i, k - 1) * h_.entry(k, j)
        entries[(i, j)] = total
    return GroupElement(g.n, g.bound, entries, g.zero)


def group_invert(g: GroupElement) -> GroupElement:
    """Two-sided inverse, solved by recursion on window length."""
    inv: dict[Window, Entry] = {}

    def get(i: int, j: int) -> Entry:
        if j == i - 1:
            return g.zero + 1
        return inv.get(normalize_window(g.n, i, j), g.zero)

    for i, j in g.windows():
        total = -g.entry(i, j)
        for k in range(i + 1, j + 1):
            total = total - g.entry(i, k - 1) * get(k, j)
        inv[(i, j)] = total
    return GroupElement(g.n, g.bound, inv, g.zero)


def _nilpotent_multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    """Product in the algebra of strictly upper window matrices (no identity part)."""
    entries: dict[Window, Entry] = {}
    for i, j in x.windows():
        total = x.zero
        for k in range(i + 1, j + 1):
            total = total + x.entry(i, k - 1) * y.entry(k, j)
        entries[(i, j)] = total
    return GroupElement(x.n, x.bound, entries, x.zero)


def exp_positive(n: int, bound: int, data: Mapping[Window, Entry], zero: Entry = Fraction(0)) -> GroupElement:
    """``exp(sum_w data[w] e_w)`` as a group element; ``x^k`` vanishes on windows shorter than k."""
    x = GroupElement(n, bound, data, zero)
    total = dict(x.entries)
    power = x
    for k in range(2, bound + 1):
        power = _nilpotent_multiply(power, x)
        for window, value in power.entries.items():
            total[window] = total.get(window, zero) + value * Fraction(1, factorial(k))
    return GroupElement(n, bound, total, zero)


def b_generator_data(n: int, bound: int) -> dict[Window, Fraction]:
    """Coefficients ``1/(j-i+1)`` of the logarithm of B."""
    return {w: Fraction(1, window_length(w)) for w in windows_up_to(n, bound)}


def b_element(n: int, bound: int) -> GroupElement:
    return exp_positive(n, bound, b_generator_data(n, bound))


def b_matrix_display(n: int, loop_degree: int) -> list[list[TruncatedSeries]]:
    """The matrix ``(1-z)^{-1} (1 on/above diagonal, z below)`` minus the identity, through z^loop_degree."""
    rows = []
    for r in range(1, n + 1):
        row = []
        for s in range(1, n + 1):
            lowest = 0 if s >= r else 1
            terms = {(t,): 1 for t in range(lowest, loop_degree + 1)}
            if s == r:
                terms.pop((0,), None)
            row.append(TruncatedSeries(1, loop_degree, terms))
        rows.append(row)
    return rows


def group_to_matrix(g: GroupElement, loop_degree: int) -> list[list[TruncatedSeries]]:
    """Matrix form ``sum g_{[i;j]} E_{i,j+1} z^{floor(j/n)}`` of the non-identity part of a scalar group element."""
    n = g.n
    acc = [[defaultdict(Fraction) for _ in range(n)] for _ in range(n)]
    for (i, j), value in g.entries.items():
        power = j // n
        if power <= loop_degree:
            acc[i - 1][residue(n, j + 1) - 1][(power,)] += value
    return [[TruncatedSeries(1, loop_degree, dict(cell)) for cell in row] for row in acc]


def g_entry_series(n: int, i: int, j: int, bound: int) -> TruncatedSeries:
    """``z^{[i;j]} / prod_{j'=i..j} (1 - z^{[i;j']})`` through total degree ``bound``."""
    out = TruncatedSeries.monomial(n, bound, window_monomial(n, i, j))
    for jj in range(i, j + 1):
        out = out * series_inv(TruncatedSeries(n, bound, {(0,) * n: 1, window_monomial(n, i, jj): -1}))
    return out


def g_element(n: int, bound: int, window_bound: int | None = None) -> GroupElement:
    """The element g of P with series entries through total degree ``bound``.

    Windows longer than ``bound`` vanish to that order, so ``window_bound``
    defaults to ``bound``.
    """
    window_bound = bound if window_bound is None else window_bound
    entries = {w: g_entry_series(n, *w, bound) for w in windows_up_to(n, window_bound)}
    return GroupElement(n, window_bound, entries, TruncatedSeries.zero(n, bound))


def twist(g: GroupElement, precision: int) -> GroupElement:
    """Conjugate by the grading operator: entry ``[i;j]`` is divided by ``z^{[i;j]}``.

    ``g`` must be known to total degree ``precision + bound`` so that the
    quotient is exact through ``precision``.
    """
    n = g.n

    def divide(window: Window, value: Entry) -> TruncatedSeries:
        w = window_monomial(n, *window)
        terms = {}
        for e, v in value.items():
            q = tuple(a - b for a, b in zip(e, w))
            if min(q) < 0:
                raise ArithmeticError(f"entry {window} is not divisible by its window monomial")
            terms[q] = v
        return TruncatedSeries(n, precision, terms)

    zero = TruncatedSeries.zero(n, precision)
    return GroupElement(n, g.bound, {w: divide(w, g.entry(*w)) for w in g.windows()}, zero)


def check_twist_conjugation(n: int, bound: int) -> tuple[bool, list[Window]]:
    """Check ``g^{-1} * twist(g) = B`` entrywise through total degree ``bound``.

    Returns the pass flag and the failing windows.
    """
    window_bound = bound
    g_full = g_element(n, bound + window_bound, window_bound)
    twisted = twist(g_full, bound)
    g = GroupElement(n, window_bound, {w: v.truncate(bound) for w, v in g_full.entries.items()}, TruncatedSeries.zero(n, bound))
    lhs = group_multiply(group_invert(g), twisted)
    one = TruncatedSeries.one(n, bound)
    b = b_element(n, window_bound)
    failing = [w for w in lhs.windows() if lhs.entry(*w) != one * b.entry(*w)]
    return (not failing, failing)


__all__ = [
    "AlgebraElement",
    "GroupElement",
    "b_element",
    "b_generator_data",
    "b_matrix_display",
    "basis_bracket",
    "basis_element",
    "central_element",
    "check_twist_conjugation",
    "classify",
    "e_minus",
    "e_plus",
    "exp_positive",
    "g_element",
    "g_entry_series",
    "group_invert",
    "group_multiply",
    "group_to_matrix",
    "h",
    "lie_bracket",
    "loop_minus",
    "loop_plus",
    "lowering_key",
    "normalize_window",
    "raising_key",
    "residue",
    "twist",
    "window_length",
    "window_order",
]
