"""The non-stationary deformed Calogero-Moser operator and its leading-term eigenfunction.

With theta_k = z_k d/dz_k the operator is

    H = Delta + eta * D + (loop term) + sum_{i<=j} m(m+1) / ((z^{[i;j]} - 1)(z^{-[i;j]} - 1)),
    Delta = sum theta_k^2 - sum theta_k theta_{k+1},   D = sum theta_k,

with k+1 read cyclically.  On z^v the kinetic part is Q(v) = sum v_k^2 -
sum v_k v_{k+1} + eta * sum v_k.  Three readings of the potential are kept
side by side (see ``VARIANTS``); the one that agrees with localization is the
package default.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from laumon.errors import DimensionError, NonGenericParametersError
from laumon.geometry import EquivParams
from laumon.series import (
    Exponent,
    OffsetSeries,
    TruncatedSeries,
    exponents_of_degree,
    format_scalar,
    series_inv,
    series_pow_rational,
    weyl_delta,
    window_monomial,
    windows_up_to,
)

VARIANTS = {
    "A": "loop coefficient mn((m+1)n+eta)/(n+eta) and window coefficient m(m+1), as printed",
    "B": "the character operator: window coefficient m(m+1-[j+1=i mod n]), loop coefficient mn+n-m^2n^2/c, "
    "first-order window terms; Y = z^b * delta * chi with chi annihilated",
    "C": "window coefficient m(m+1) and no loop term",
}


@dataclass(frozen=True)
class CMOperatorSpec:
    params: EquivParams
    bound: int
    variant: str = "C"

    def __post_init__(self):
        if self.bound < 0:
            raise DimensionError("truncation bound must be non-negative")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class EigenData:
    b: tuple[Fraction, ...]
    lam: Fraction
    Y: OffsetSeries

    def to_dict(self) -> dict:
        return {
            "b": [format_scalar(x) for x in self.b],
            "lambda": format_scalar(self.lam),
            "Y": self.Y.body.to_records(),
        }


def b_exponents(params: EquivParams) -> tuple[Fraction, ...]:
    n, xi, eta = params.n, params.xi, params.eta
    total = sum(xi, Fraction(0))
    return tuple(
        (k * total - n * sum(xi[:k], Fraction(0))) / n - Fraction(k * (n - k), 2) * eta
        for k in range(1, n + 1)
    )


def eigenvalue_lambda(params: EquivParams) -> Fraction:
    n, xi, eta = params.n, params.xi, params.eta
    total = sum(xi, Fraction(0))
    return (
        -Fraction((n - 1) * n * (n + 1), 24) * eta**2
        - total**2 / (2 * n)
        + sum((x * x for x in xi), Fraction(0)) / 2
    )


def laplacian_symbol(v: Sequence) -> Fraction:
    n = len(v)
    return sum((x * x for x in v), Fraction(0)) - sum((v[k] * v[(k + 1) % n] for k in range(n)), Fraction(0))


def kinetic_symbol(v: Sequence, eta: Fraction) -> Fraction:
    """Q(v): eigenvalue of Delta + eta*D on z^v."""
    return laplacian_symbol(v) + eta * sum(v, Fraction(0))


# potentials -----------------------------------------------------------------
#
# A potential is a map exponent e -> (constant, linear form on d): the operator
# sends z^d to (constant + <linear, d>) z^{d+e}.


def _add_potential(pot: dict, e: Exponent, const: Fraction, linear: Sequence[Fraction] | None = None) -> None:
    n = len(e)
    c0, lin = pot.get(e, (Fraction(0), (Fraction(0),) * n))
    if linear is not None:
        lin = tuple(a + b for a, b in zip(lin, linear))
    pot[e] = (c0 + const, lin)


def _loop_series(n: int, bound: int) -> dict[Exponent, Fraction]:
    """sum_{k>0} k z^k / (1 - z^k) with z^k = (z_1...z_n)^k."""
    out: dict[Exponent, Fraction] = {}
    for k in range(1, bound // n + 1):
        for t in range(1, bound // (n * k) + 1):
            e = (k * t,) * n
            out[e] = out.get(e, Fraction(0)) + k
    return out


def _window_pair_series(n: int, bound: int, coeff) -> dict[Exponent, Fraction]:
    """sum_{i<=j} coeff(i, j) / ((z^w - 1)(z^{-w} - 1)) = -sum coeff * t z^{t w}."""
    out: dict[Exponent, Fraction] = {}
    for i, j in windows_up_to(n, bound):
        w = window_monomial(n, i, j)
        c = coeff(i, j)
        if not c:
            continue
        t = 1
        while t * (j - i + 1) <= bound:
            e = tuple(t * x for x in w)
            out[e] = out.get(e, Fraction(0)) - t * c
            t += 1
    return out


def loop_coefficient(spec: CMOperatorSpec) -> Fraction:
    p = spec.params
    n, m, eta = p.n, p.m, p.eta
    if spec.variant == "A":
        return m * n * ((m + 1) * n + eta) / (n + eta)
    if spec.variant == "B":
        c = p.central_charge
        return m * n + n - m * m * n * n / c
    return Fraction(0)


def _phi(params: EquivParams, i: int) -> Fraction:
    """phi(i) = xi_i + i, with phi(i + n) = phi(i) + n + eta."""
    n = params.n
    i0 = (i - 1) % n + 1
    shift = (i - i0) // n
    return params.xi[i0 - 1] + i0 + shift * (n + params.eta)


def _xi_ext(params: EquivParams, i: int) -> Fraction:
    n = params.n
    i0 = (i - 1) % n + 1
    return params.xi[i0 - 1] + ((i - i0) // n) * params.eta


def potential(spec: CMOperatorSpec) -> dict[Exponent, tuple[Fraction, tuple[Fraction, ...]]]:
    p = spec.params
    n, m, bound = p.n, p.m, spec.bound
    pot: dict = {}
    zero_lin = (Fraction(0),) * n
    loop = loop_coefficient(spec)
    if loop:
        for e, v in _loop_series(n, bound).items():
            # variants A and C write k z^k/(z^k - 1) = -(...), B writes k/(z^{-k} - 1) = +(...)
            sign = 1 if spec.variant == "B" else -1
            _add_potential(pot, e, sign * loop * v)
    if spec.variant == "B":
        coeff = lambda i, j: m * (m + 1 - (1 if (j + 1 - i) % n == 0 else 0))
    else:
        coeff = lambda i, j: m * (m + 1)
    for e, v in _window_pair_series(n, bound, coeff).items():
        _add_potential(pot, e, v)
    if spec.variant == "B":
        # (phi(i) - phi(j+1) + d_{j+1} - d_j - d_i + d_{i-1}) / (z^{-w} - 1), 1/(z^{-w}-1) = sum_t z^{tw}
        for i, j in windows_up_to(n, bound):
            w = window_monomial(n, i, j)
            const = _phi(p, i) - _phi(p, j + 1)
            lin = [Fraction(0)] * n
            for idx, sgn in ((j + 1, 1), (j, -1), (i, -1), (i - 1, 1)):
                lin[(idx - 1) % n] += sgn
            t = 1
            while t * (j - i + 1) <= bound:
                _add_potential(pot, tuple(t * x for x in w), const, lin)
                t += 1
    return {e: v for e, v in pot.items() if v[0] or any(v[1])}


def _character_symbol(params: EquivParams, d: Sequence[int]) -> Fraction:
    """Diagonal part of the character operator on z^d: Delta + sum (xi_{i+1} - xi_i) theta_i."""
    n = params.n
    drift = sum(((_xi_ext(params, i + 1) - _xi_ext(params, i)) * d[i - 1] for i in range(1, n + 1)), Fraction(0))
    return laplacian_symbol(d) + drift


def _apply_potential(pot, body: TruncatedSeries) -> TruncatedSeries:
    n, bound = body.n, body.bound
    out: dict[Exponent, Fraction] = {}
    for d, c in body.items():
        for e, (const, lin) in pot.items():
            tgt = tuple(a + b for a, b in zip(d, e))
            if sum(tgt) > bound:
                continue
            g = const + sum((a * b for a, b in zip(lin, d)), Fraction(0))
            if g:
                out[tgt] = out.get(tgt, Fraction(0)) + g * c
    return TruncatedSeries(n, bound, out)


def _apply_character_operator(spec: CMOperatorSpec, chi: TruncatedSeries) -> TruncatedSeries:
    p = spec.params
    diag = TruncatedSeries(chi.n, chi.bound, {d: _character_symbol(p, d) * c for d, c in chi.items()})
    return diag + _apply_potential(potential(spec), chi)


def hamiltonian_apply(spec: CMOperatorSpec, f: OffsetSeries) -> OffsetSeries:
    """Apply the selected operator to z^offset * body, truncated at the body's bound."""
    p = spec.params
    if f.n != p.n:
        raise DimensionError("rank mismatch")
    body = f.body
    if spec.variant == "B":
        # conjugated form: H_B = F * Htilde * F^{-1} + lambda with F = z^b * delta
        if tuple(f.offset) != b_exponents(p):
            raise ValueError("the character operator acts on series with offset b")
        delta = weyl_delta(p.n, body.bound)
        chi = body * series_inv(delta)
        out = _apply_character_operator(spec, chi) * delta + body * eigenvalue_lambda(p)
        return OffsetSeries(f.offset, out)
    off = tuple(f.offset)
    kin = {d: kinetic_symbol([a + b for a, b in zip(off, d)], p.eta) * c for d, c in body.items()}
    out = TruncatedSeries(body.n, body.bound, kin) + _apply_potential(potential(spec), body)
    return OffsetSeries(off, out)


def _solve_recursion(pot, bound: int, n: int, symbol) -> TruncatedSeries:
    coeffs: dict[Exponent, Fraction] = {(0,) * n: Fraction(1)}
    base = symbol((0,) * n)
    for degree in range(1, bound + 1):
        for d in exponents_of_degree(n, degree):
            rhs = Fraction(0)
            for e, (const, lin) in pot.items():
                src = tuple(a - b for a, b in zip(d, e))
                if min(src) < 0:
                    continue
                c = coeffs.get(src)
                if c:
                    rhs -= (const + sum((a * b for a, b in zip(lin, src)), Fraction(0))) * c
            gap = symbol(d) - base
            if gap == 0:
                # either no solution or a free coefficient; both break uniqueness
                raise NonGenericParametersError(f"resonance at degree {d}", degree=d)
            if rhs:
                coeffs[d] = rhs / gap
    return TruncatedSeries(n, bound, coeffs)


def solve_character(spec: CMOperatorSpec) -> TruncatedSeries:
    """The power series chi with chi(0) = 1 annihilated by the character operator (variant B)."""
    p = spec.params
    return _solve_recursion(potential(spec), spec.bound, p.n, lambda d: _character_symbol(p, d))


def solve_eigenfunction(spec: CMOperatorSpec) -> EigenData:
    p = spec.params
    b = b_exponents(p)
    lam = eigenvalue_lambda(p)
    if spec.variant == "B":
        body = solve_character(spec) * weyl_delta(p.n, spec.bound)
    else:
        symbol = lambda d: kinetic_symbol([x + y for x, y in zip(b, d)], p.eta)
        body = _solve_recursion(potential(spec), spec.bound, p.n, symbol)
    return EigenData(b, lam, OffsetSeries(b, body))


def reference_partition_function(spec: CMOperatorSpec, eigen: EigenData | None = None) -> TruncatedSeries:
    """Z = (Y with its leading monomial removed) * delta^{-m-1}."""
    eigen = eigen or solve_eigenfunction(spec)
    p = spec.params
    return eigen.Y.body * series_pow_rational(weyl_delta(p.n, spec.bound), -p.m - 1)


def residual(spec: CMOperatorSpec, eigen: EigenData) -> TruncatedSeries:
    """(H - lambda) Y, as a body series; zero through the bound for a true eigenfunction."""
    hy = hamiltonian_apply(spec, eigen.Y)
    return hy.body - eigen.Y.body * eigen.lam


__all__ = [
    "CMOperatorSpec",
    "EigenData",
    "VARIANTS",
    "b_exponents",
    "eigenvalue_lambda",
    "hamiltonian_apply",
    "kinetic_symbol",
    "laplacian_symbol",
    "loop_coefficient",
    "potential",
    "reference_partition_function",
    "residual",
    "solve_character",
    "solve_eigenfunction",
]
