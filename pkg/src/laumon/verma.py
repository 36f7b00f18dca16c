"""The graded Verma module of affine gl_n, the evaluation module S^m, and the intertwiner Phi_m.

Vectors of the Verma module H are combinations of PBW monomials: sorted
tuples of lowering windows applied to the vacuum v, where

    h_i v = (xi_i + i) v,    c v = (-n - eta) v,    e+_{[i;j]} v = 0.

S^m is spanned by y^{m+k} = prod y_i^{m+k_i} with sum k_i = 0, and
z^a E_{ij} acts by -y_j d/dy_i + m [i=j][a=0]; the central element acts by 0.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from laumon.affine import (
    AlgebraElement,
    Key,
    Window,
    b_generator_data,
    basis_bracket,
    classify,
    e_minus,
    e_plus,
    g_entry_series,
    h,
    lowering_key,
    loop_minus,
    loop_plus,
    raising_key,
    residue,
    window_length,
    window_order,
)
from laumon.errors import DegreeBoundError, DimensionError, NonGenericParametersError
from laumon.geometry import DEFAULT_CONVENTIONS, Conventions, EquivParams
from laumon.series import (
    Exponent,
    TruncatedSeries,
    exponents_of_degree,
    format_scalar,
    series_inv,
    series_pow_rational,
    window_monomial,
    windows_up_to,
)

Monomial = tuple[Window, ...]
Offset = tuple[int, ...]
Vec = dict  # Monomial -> Fraction
TensorVec = dict  # (Monomial, Offset) -> Fraction


def _accumulate(out: dict, key, value) -> None:
    if not value:
        return
    total = out.get(key, Fraction(0)) + value
    if total:
        out[key] = total
    else:
        out.pop(key, None)


def monomial_degree(n: int, mono: Monomial) -> Exponent:
    d = [0] * n
    for i, j in mono:
        for k, x in enumerate(window_monomial(n, i, j)):
            d[k] += x
    return tuple(d)


def pbw_basis(n: int, d: Sequence[int]) -> list[Monomial]:
    """All canonically ordered multisets of lowering windows with total monomial d."""
    d = tuple(d)
    total = sum(d)
    windows = sorted(windows_up_to(n, total), key=window_order)
    mons = [window_monomial(n, *w) for w in windows]
    out: list[Monomial] = []

    def rec(start: int, remaining: tuple[int, ...], prefix: list[Window]) -> None:
        if not any(remaining):
            out.append(tuple(prefix))
            return
        for idx in range(start, len(windows)):
            w = mons[idx]
            if all(a <= b for a, b in zip(w, remaining)):
                prefix.append(windows[idx])
                rec(idx, tuple(b - a for a, b in zip(w, remaining)), prefix)
                prefix.pop()

    rec(0, d, [])
    return out


def pbw_basis_up_to(n: int, bound: int) -> list[Monomial]:
    out = []
    for degree in range(bound + 1):
        for d in exponents_of_degree(n, degree):
            out.extend(pbw_basis(n, d))
    return out


class VermaModule:
    """Action of affine gl_n on the Verma module with highest weight fixed by ``params``.

    Results of moving a basis element through a PBW monomial are cached.
    """

    def __init__(
        self,
        params: EquivParams,
        loop_level: Fraction | None = None,
        conventions: Conventions = DEFAULT_CONVENTIONS,
    ):
        self.params = params
        self.n = params.n
        self.conventions = conventions
        self.c = -self.n - conventions.geometric_eta(params)
        if self.c == 0:
            raise NonGenericParametersError("central charge vanishes (critical level)")
        # [a+_k, a-_k] = k * loop_level; the standard cocycle gives n * c
        self.loop_level = self.n * self.c if loop_level is None else Fraction(loop_level)
        self.trace_shift = (self.loop_level / (self.n * self.c) - 1) / self.n
        self._act_cache: dict[tuple[Key, Monomial], Vec] = {}
        self._insert_cache: dict[tuple[Window, Monomial], Vec] = {}

    # weights ------------------------------------------------------------

    def cartan_eigenvalue(self, r: int, mono: Monomial) -> Fraction:
        """h_r on a monomial of degree d: xi_r + r - d_r + d_{r-1} (d_0 = d_n)."""
        d = monomial_degree(self.n, mono)
        return self.params.xi[r - 1] + r - d[r - 1] + d[(r - 2) % self.n]

    # action -------------------------------------------------------------

    def _lowering_times(self, f: Window, vec: Mapping[Monomial, Fraction]) -> Vec:
        out: Vec = {}
        for mono, coeff in vec.items():
            for res, c2 in self._insert(f, mono).items():
                _accumulate(out, res, coeff * c2)
        return out

    def _apply_combination(self, terms: Mapping[Key, Fraction], central: Fraction, mono: Monomial) -> Vec:
        out: Vec = {}
        if central:
            _accumulate(out, mono, central * self.c)
        for key, coeff in terms.items():
            for res, c2 in self._act_key(key, mono).items():
                _accumulate(out, res, coeff * c2)
        return out

    def _insert(self, f: Window, mono: Monomial) -> Vec:
        """f * (monomial), re-expressed in canonical order."""
        if not mono or window_order(f) <= window_order(mono[0]):
            return {(f,) + mono: Fraction(1)}
        cache_key = (f, mono)
        hit = self._insert_cache.get(cache_key)
        if hit is not None:
            return hit
        g, rest = mono[0], mono[1:]
        out: Vec = {}
        for res, c in self._insert(f, rest).items():
            for res2, c2 in self._insert(g, res).items():
                _accumulate(out, res2, c * c2)
        terms, central = basis_bracket(self.n, lowering_key(self.n, *f), lowering_key(self.n, *g), self.trace_shift)
        for res, c in self._apply_combination(terms, central, rest).items():
            _accumulate(out, res, c)
        self._insert_cache[cache_key] = out
        return out

    def _act_key(self, key: Key, mono: Monomial) -> Vec:
        kind, data = classify(self.n, key)
        if kind == "lower":
            return self._insert(data, mono)
        if kind == "cartan":
            value = self.cartan_eigenvalue(data, mono)
            return {mono: value} if value else {}
        if not mono:
            return {}
        cache_key = (key, mono)
        hit = self._act_cache.get(cache_key)
        if hit is not None:
            return hit
        f, rest = mono[0], mono[1:]
        out = self._lowering_times(f, self._act_key(key, rest))
        terms, central = basis_bracket(self.n, key, lowering_key(self.n, *f), self.trace_shift)
        for res, c in self._apply_combination(terms, central, rest).items():
            _accumulate(out, res, c)
        self._act_cache[cache_key] = out
        return out

    def act(self, x: AlgebraElement, vec: Mapping[Monomial, Fraction]) -> Vec:
        if x.n != self.n:
            raise DimensionError("rank mismatch")
        out: Vec = {}
        for mono, coeff in vec.items():
            for res, c in self._apply_combination(x.terms, x.central, mono).items():
                _accumulate(out, res, coeff * c)
        return out

    # named operators ------------------------------------------------------

    def apply_B(self, vec: Mapping[Monomial, Fraction]) -> Vec:
        """exp(sum_w e+_w / |w|) applied to a vector; terminates since raising lowers degree."""
        top = max((sum(monomial_degree(self.n, mono)) for mono in vec), default=0)
        gen = AlgebraElement(
            self.n, {raising_key(self.n, *w): c for w, c in b_generator_data(self.n, top).items()}
        )
        out: Vec = dict(vec)
        power: Vec = dict(vec)
        for k in range(1, top + 1):
            power = self.act(gen, power)
            if not power:
                break
            for mono, c in power.items():
                _accumulate(out, mono, c / factorial(k))
        return out

    def energy_apply(self, vec: Mapping[Monomial, Fraction]) -> Vec:
        """C = sum (h_i^2/2 + c i h_i / n) + sum e-_w e+_w + (1/c) sum_k a-_k a+_k."""
        n, c = self.n, self.c
        out: Vec = {}
        for mono, coeff in vec.items():
            single = {mono: Fraction(1)}
            top = sum(monomial_degree(n, mono))
            for i in range(1, n + 1):
                hv = self.act(h(n, i), single)
                hhv = self.act(h(n, i), hv)
                for res, v in hhv.items():
                    _accumulate(out, res, coeff * v / 2)
                for res, v in hv.items():
                    _accumulate(out, res, coeff * c * i * v / n)
            for w in windows_up_to(n, top):
                for res, v in self.act(e_minus(n, *w), self.act(e_plus(n, *w), single)).items():
                    _accumulate(out, res, coeff * v)
            for k in range(1, top // n + 1):
                for res, v in self.act(loop_minus(n, k), self.act(loop_plus(n, k), single)).items():
                    _accumulate(out, res, coeff * v / c)
        return out


@dataclass(frozen=True)
class VermaVector:
    """A vector of the Verma module together with the module that acts on it."""

    module: VermaModule
    terms: Mapping[Monomial, Fraction]

    @classmethod
    def vacuum(cls, module: VermaModule) -> VermaVector:
        return cls(module, {(): Fraction(1)})

    @classmethod
    def basis(cls, module: VermaModule, mono: Monomial) -> VermaVector:
        return cls(module, {tuple(mono): Fraction(1)})

    def act(self, x: AlgebraElement) -> VermaVector:
        return VermaVector(self.module, self.module.act(x, self.terms))

    def __add__(self, other: VermaVector) -> VermaVector:
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return VermaVector(self.module, out)

    def scale(self, factor) -> VermaVector:
        factor = Fraction(factor)
        return VermaVector(self.module, {k: v * factor for k, v in self.terms.items() if v * factor})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VermaVector):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def to_records(self) -> list[dict]:
        return [
            {"monomial": [{"i": i, "j": j} for i, j in mono], "value": format_scalar(v)}
            for mono, v in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))
        ]


def act(x: AlgebraElement, u: VermaVector) -> VermaVector:
    return u.act(x)


def apply_B(u: VermaVector) -> VermaVector:
    return VermaVector(u.module, u.module.apply_B(u.terms))


def energy_apply(u: VermaVector) -> VermaVector:
    return VermaVector(u.module, u.module.energy_apply(u.terms))


# the evaluation module S^m ---------------------------------------------------


def smodule_act_key(key: Key, offset: Offset, m: Fraction) -> dict[Offset, Fraction]:
    a, r, s = key
    coeff = -(m + offset[r - 1])
    out: dict[Offset, Fraction] = {}
    if r == s:
        value = coeff + (m if a == 0 else 0)
        if value:
            out[offset] = value
        return out
    if coeff:
        k = list(offset)
        k[r - 1] -= 1
        k[s - 1] += 1
        out[tuple(k)] = coeff
    return out


def smodule_act(x: AlgebraElement, vec: Mapping[Offset, Fraction], m: Fraction) -> dict[Offset, Fraction]:
    """Action on S^m; the central part acts by zero."""
    out: dict[Offset, Fraction] = {}
    for offset, coeff in vec.items():
        if len(offset) != x.n:
            raise DimensionError("offset length differs from rank")
        for key, c in x.terms.items():
            for res, v in smodule_act_key(key, offset, m).items():
                _accumulate(out, res, coeff * c * v)
    return out


def ev(vec: Mapping[Offset, Fraction]) -> Fraction:
    """Set y_1 = ... = y_n = 1."""
    return sum(vec.values(), Fraction(0))


@dataclass(frozen=True)
class SModVector:
    n: int
    m: Fraction
    terms: Mapping[Offset, Fraction]

    @classmethod
    def top(cls, n: int, m) -> SModVector:
        return cls(n, Fraction(m), {(0,) * n: Fraction(1)})

    def act(self, x: AlgebraElement) -> SModVector:
        return SModVector(self.n, self.m, smodule_act(x, self.terms, self.m))


def _ev_g_bases(n: int, bound: int) -> list[TruncatedSeries]:
    """1 + sum_{j>=i} g_{[i;j]} for i = 1..n."""
    out = []
    for i in range(1, n + 1):
        acc = TruncatedSeries.one(n, bound)
        for j in range(i, i + bound):
            acc = acc + g_entry_series(n, i, j, bound)
        out.append(acc)
    return out


def ev_g_inverse(s: SModVector, bound: int) -> TruncatedSeries:
    """y^alpha -> prod_i (1 + sum_{j>=i} g_{[i;j]})^{alpha_i}, with alpha_i = m + k_i possibly rational."""
    bases = _ev_g_bases(s.n, bound)
    total = TruncatedSeries.zero(s.n, bound)
    for offset, coeff in s.terms.items():
        term = TruncatedSeries.one(s.n, bound)
        for i in range(s.n):
            term = term * series_pow_rational(bases[i], s.m + offset[i])
        total = total + term * coeff
    return total


def ev_g_inverse_direct(s: SModVector, bound: int) -> TruncatedSeries:
    """Oracle for integral exponents: repeated multiplication and inversion instead of rational powers."""
    bases = _ev_g_bases(s.n, bound)
    total = TruncatedSeries.zero(s.n, bound)
    for offset, coeff in s.terms.items():
        term = TruncatedSeries.one(s.n, bound)
        for i in range(s.n):
            alpha = s.m + offset[i]
            if alpha.denominator != 1:
                raise ValueError("the direct oracle needs integral exponents")
            term = term * bases[i] ** int(alpha)
        total = total + term * coeff
    return total


# the intertwiner ---------------------------------------------------------------


def weight_offset(n: int, d: Sequence[int]) -> Offset:
    """S^m offset paired with H_d in Phi(v): k_i = d_{i-1} - d_i."""
    return tuple(d[(i - 1) % n] - d[i] for i in range(n))


def annihilator_generators(n: int, bound: int) -> list[AlgebraElement]:
    gens = [e_plus(n, i, i) for i in range(1, n + 1)]
    gens += [loop_plus(n, k) for k in range(1, bound // n + 1)]
    return gens


def tensor_act(module: VermaModule, x: AlgebraElement, vec: Mapping, m: Fraction, bound: int | None) -> TensorVec:
    """Coproduct action x (x) 1 + 1 (x) x on H (x) S^m, dropping H-degrees above ``bound``."""
    out: TensorVec = {}
    n = module.n
    for (mono, off), coeff in vec.items():
        for res, c in module.act(x, {mono: Fraction(1)}).items():
            if bound is not None and sum(monomial_degree(n, res)) > bound:
                continue
            _accumulate(out, (res, off), coeff * c)
        for res, c in smodule_act(x, {off: Fraction(1)}, m).items():
            _accumulate(out, (mono, res), coeff * c)
    return out


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    dense = [[QQ(0)] * ncols for _ in rows]
    for r, row in enumerate(rows):
        for cidx, v in row.items():
            dense[r][cidx] = _to_qq(v)
    mat = DomainMatrix(dense, (len(rows), ncols), QQ)
    basis = mat.nullspace().to_Matrix()
    out = []
    for r in range(basis.rows):
        out.append([Fraction(int(x.p), int(x.q)) for x in basis.row(r)])
    return out


@dataclass
class IntertwinerData:
    """Phi_m(v) through H-degree ``bound``, plus the solution-space dimension of each truncated system."""

    module: VermaModule
    m: Fraction
    bound: int
    vacuum_image: dict[Monomial, Fraction]
    nullities: dict[int, int]

    def __post_init__(self):
        self._cache: dict[Monomial, TensorVec] = {}

    def image(self, mono: Monomial) -> TensorVec:
        """Phi_m(mono) = Delta(f_1) ... Delta(f_r) Phi_m(v), H-degrees <= bound."""
        mono = tuple(mono)
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        n = self.module.n
        if not mono:
            out = {
                (u, weight_offset(n, monomial_degree(n, u))): c for u, c in self.vacuum_image.items()
            }
        else:
            f = e_minus(n, *mono[0])
            out = tensor_act(self.module, f, self.image(mono[1:]), self.m, self.bound)
        self._cache[mono] = out
        return out

    def apply(self, vec: Mapping[Monomial, Fraction]) -> TensorVec:
        out: TensorVec = {}
        for mono, c in vec.items():
            for key, v in self.image(mono).items():
                _accumulate(out, key, c * v)
        return out

    def matrix(self, degree: Sequence[int]) -> list[list[str]]:
        """Block of Phi_m from H_d to H_d (x) y^m in the PBW basis."""
        n = self.module.n
        basis = pbw_basis(n, degree)
        zero = (0,) * n
        rows = []
        for u in basis:
            img = self.image(u)
            rows.append([format_scalar(img.get((w, zero), Fraction(0))) for w in basis])
        return rows

    def to_dict(self) -> dict:
        n = self.module.n
        blocks = []
        for degree in range(self.bound + 1):
            for d in exponents_of_degree(n, degree):
                blocks.append({"degree": list(d), "matrix": self.matrix(d)})
        return {"m": format_scalar(self.m), "bound": self.bound, "nullities": self.nullities, "blocks": blocks}


def _lowering_depth(n: int, x: AlgebraElement) -> int:
    """Total degree by which a homogeneous raising element lowers H-degree."""
    return max(window_length(classify(n, k)[1]) for k in x.terms)


def _solve_vacuum_image(module: VermaModule, m: Fraction, bound: int) -> tuple[dict[Monomial, Fraction], int]:
    """Solve Delta(x) Phi(v) = 0 for the generators x, on all H-degrees where the equations are complete."""
    n = module.n
    unknowns = pbw_basis_up_to(n, bound)
    index = {u: k for k, u in enumerate(unknowns)}
    rows: list[dict[int, Fraction]] = []
    for x in annihilator_generators(n, bound):
        depth = _lowering_depth(n, x)
        eqs: dict[tuple, dict[int, Fraction]] = defaultdict(dict)
        for u, col in index.items():
            d = monomial_degree(n, u)
            image = tensor_act(module, x, {(u, weight_offset(n, d)): Fraction(1)}, m, None)
            for target, c in image.items():
                # a target row is complete only if every source degree |res| + depth is unknown
                if sum(monomial_degree(n, target[0])) + depth <= bound:
                    _accumulate(eqs[target], col, c)
        rows.extend(row for row in eqs.values() if row)
    null = _nullspace(rows, len(unknowns))
    dim = len(null)
    if dim != 1:
        return {}, dim
    vec = null[0]
    lead = vec[index[()]]
    if lead == 0:
        raise NonGenericParametersError("intertwiner has vanishing leading coefficient", degree=(0,) * n)
    return {u: vec[k] / lead for u, k in index.items() if vec[k]}, dim


def solve_intertwiner(params: EquivParams, bound: int, module: VermaModule | None = None) -> IntertwinerData:
    module = module or VermaModule(params)
    m = params.m
    nullities = {}
    vacuum: dict[Monomial, Fraction] = {}
    for b in range(bound + 1):
        vacuum, dim = _solve_vacuum_image(module, m, b)
        nullities[b] = dim
        if dim != 1:
            raise NonGenericParametersError(
                f"intertwiner solution space has dimension {dim} at degree bound {b}", degree=None
            )
    return IntertwinerData(module, m, bound, vacuum, nullities)


def operator_A(u: Mapping[Monomial, Fraction], phi: IntertwinerData, upto: int | None = None) -> Vec:
    """A(m) u = (Id (x) ev) Phi_m (B u), keeping H-degrees <= ``upto`` (default: phi's bound)."""
    module = phi.module
    n = module.n
    upto = phi.bound if upto is None else upto
    if upto > phi.bound:
        raise DegreeBoundError(f"intertwiner known through degree {phi.bound}, requested {upto}")
    out: Vec = {}
    for (mono, off), c in phi.apply(module.apply_B(u)).items():
        if sum(monomial_degree(n, mono)) <= upto:
            _accumulate(out, mono, c)
    return out


# traces ------------------------------------------------------------------------


def graded_trace(n: int, bound: int, op: Callable[[Monomial], Mapping[Monomial, Fraction]]) -> TruncatedSeries:
    """sum_d z^d Tr(op restricted to H_d)."""
    terms = {}
    for degree in range(bound + 1):
        for d in exponents_of_degree(n, degree):
            total = Fraction(0)
            for u in pbw_basis(n, d):
                total += op(u).get(u, Fraction(0))
            terms[d] = total
    return TruncatedSeries(n, bound, terms)


def trace_A(phi: IntertwinerData, bound: int | None = None) -> TruncatedSeries:
    bound = phi.bound if bound is None else bound
    return graded_trace(phi.module.n, bound, lambda u: operator_A({u: Fraction(1)}, phi, bound))


def trace_B(module: VermaModule, bound: int) -> TruncatedSeries:
    return graded_trace(module.n, bound, lambda u: module.apply_B({u: Fraction(1)}))


def intertwiner_character(phi: IntertwinerData, bound: int | None = None) -> TruncatedSeries:
    """Coefficient of (y_1...y_n)^m in Tr(Phi_m z), as a power series."""
    n = phi.module.n
    bound = phi.bound if bound is None else bound
    zero = (0,) * n

    def diag(u: Monomial) -> dict:
        return {w: c for (w, off), c in phi.image(u).items() if off == zero}

    return graded_trace(n, bound, diag)


# the vertex relations ------------------------------------------------------------


def _difference(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        _accumulate(out, k, -v)
    return out


def _scaled(vec: Mapping, factor) -> dict:
    return {k: v * factor for k, v in vec.items() if v * factor}


def _sum(*vecs: Mapping) -> dict:
    out: dict = {}
    for vec in vecs:
        for k, v in vec.items():
            _accumulate(out, k, v)
    return out


def _truncate(vec: Mapping[Monomial, Fraction], n: int, bound: int) -> dict:
    return {k: v for k, v in vec.items() if sum(monomial_degree(n, k)) <= bound}


@dataclass
class RelationRecord:
    name: str
    monomial: Monomial
    difference: dict

    @property
    def ok(self) -> bool:
        return not self.difference

    def to_dict(self) -> dict:
        return {
            "relation": self.name,
            "monomial": [list(w) for w in self.monomial],
            "status": "pass" if self.ok else "fail",
            "difference": [
                {"monomial": [list(w) for w in k], "value": format_scalar(v)} for k, v in self.difference.items()
            ],
        }


def check_vertex_relations(
    params: EquivParams, bound: int, phi: IntertwinerData | None = None, loop_orders: Iterable[int] = (1,)
) -> list[RelationRecord]:
    """Evaluate both sides of the three families of relations on every PBW vector of degree <= bound.

    Comparisons are made on H-degrees <= bound; phi must reach bound + n * max(k)
    so that the raising operators see every component they need.
    """
    n = params.n
    m = params.m
    loop_orders = tuple(loop_orders)
    needed = bound + n * max(loop_orders + (1,))
    phi = phi or solve_intertwiner(params, needed)
    if phi.bound < needed:
        raise DegreeBoundError(f"relations through degree {bound} need the intertwiner through {needed}")
    module = phi.module
    c = module.c
    top = phi.bound
    A = lambda vec: operator_A(vec, phi, top)
    records: list[RelationRecord] = []
    for u in pbw_basis_up_to(n, bound):
        single = {u: Fraction(1)}
        Au = A(single)
        for i in range(1, n + 1):
            # e+_{i+1} A - A e+_i = h_{i+1} A - A h_{i+1} + m A
            lhs = _difference(module.act(e_plus(n, i + 1, i + 1), Au), A(module.act(e_plus(n, i, i), single)))
            rhs = _sum(
                module.act(h(n, i + 1), Au),
                _scaled(A(module.act(h(n, i + 1), single)), -1),
                _scaled(Au, m),
            )
            records.append(RelationRecord(f"raising[{i}]", u, _truncate(_difference(lhs, rhs), n, bound)))
            # e-_i A - A e-_i = h_{i+1} A - A h_i + m A
            lhs = _difference(module.act(e_minus(n, i, i), Au), A(module.act(e_minus(n, i, i), single)))
            rhs = _sum(
                module.act(h(n, i + 1), Au),
                _scaled(A(module.act(h(n, i), single)), -1),
                _scaled(Au, m),
            )
            records.append(RelationRecord(f"lowering[{i}]", u, _truncate(_difference(lhs, rhs), n, bound)))
        for k in loop_orders:
            lhs = _difference(module.act(loop_plus(n, k), Au), A(module.act(loop_plus(n, k), single)))
            records.append(RelationRecord(f"loop+[{k}]", u, _truncate(_difference(lhs, _scaled(Au, m * n)), n, bound)))
            lhs = _difference(module.act(loop_minus(n, k), Au), A(module.act(loop_minus(n, k), single)))
            records.append(
                RelationRecord(f"loop-[{k}]", u, _truncate(_difference(lhs, _scaled(Au, m * n - c)), n, bound))
            )
    return records


def energy_differences(module: VermaModule, bound: int) -> list[tuple[Monomial, dict]]:
    """(C - C|_vacuum - (1 + c/n)|d|) u for each basis vector u with |d| <= bound; all should vanish."""
    n, c = module.n, module.c
    vac = module.energy_apply({(): Fraction(1)}).get((), Fraction(0))
    out = []
    for u in pbw_basis_up_to(n, bound):
        d = sum(monomial_degree(n, u))
        expected = vac + (1 + c / n) * d
        diff = _difference(module.energy_apply({u: Fraction(1)}), {u: expected})
        out.append((u, diff))
    return out


__all__ = [
    "IntertwinerData",
    "RelationRecord",
    "SModVector",
    "VermaModule",
    "VermaVector",
    "act",
    "annihilator_generators",
    "apply_B",
    "check_vertex_relations",
    "energy_apply",
    "energy_differences",
    "ev",
    "ev_g_inverse",
    "ev_g_inverse_direct",
    "graded_trace",
    "intertwiner_character",
    "monomial_degree",
    "operator_A",
    "pbw_basis",
    "pbw_basis_up_to",
    "smodule_act",
    "smodule_act_key",
    "tensor_act",
    "solve_intertwiner",
    "trace_A",
    "trace_B",
    "weight_offset",
]
