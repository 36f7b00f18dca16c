"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the table, or
through pytest, where the table is repeated in the terminal summary.

Two criteria contain claims that do not hold for the objects as defined:
the "+1 coefficients / pairwise distinct weights" part of the fixed-point
suite, and the trace bridge (g) and character formula (h) of the
representation suite.  Those parts are computed faithfully and kept as
strict xfail tests, so the printed line reads FAIL and pytest stays green
only while they keep failing.  The evidence tests at the bottom pin down
why they fail.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import pytest

from laumon.affine import b_element, b_matrix_display, check_twist_conjugation, group_to_matrix
from laumon.calogero import (
    CMOperatorSpec,
    reference_partition_function,
    residual,
    solve_eigenfunction,
)
from laumon.geometry import (
    DEFAULT_CONVENTIONS,
    EquivParams,
    enumerate_fixed_points,
    fixed_point_counts,
    localization_partition_function,
    tangent_character,
    tangent_weights,
)
from laumon.series import (
    TruncatedSeries,
    exponents_of_degree,
    exponents_up_to,
    series_inv,
    series_pow_rational,
    weyl_delta,
)
from laumon.verify import first_difference, lambda_identity_holds, random_generic_params, resolve_ledger
from laumon.verma import (
    SModVector,
    VermaModule,
    check_vertex_relations,
    energy_differences,
    ev_g_inverse,
    intertwiner_character,
    operator_A,
    pbw_basis_up_to,
    solve_intertwiner,
    trace_A,
    trace_B,
)

F = Fraction
RESULTS: dict[str, tuple[bool, str]] = {}


def record(key: str, ok: bool, text: str) -> None:
    RESULTS[key] = (ok, text)
    print(f"{'PASS' if ok else 'FAIL'} {key}: {text}")


def draws(n: int, count: int, m=None, seed: int = 0) -> list[EquivParams]:
    """Random rational draws (|p|, q <= 20), screened for genericity through degree 4."""
    rng = random.Random(7919 * n + seed)
    return [random_generic_params(rng, n, m, 4 if n < 3 else 3) for _ in range(count)]


def describe(diff) -> str:
    if diff is None:
        return "equal"
    e, a, b = diff
    return f"first difference at {e}: {a} vs {b}"


# 1 ---------------------------------------------------------------------------


def criterion_1():
    bad = [p for n in (1, 2, 3) for p in draws(n, 10) if not lambda_identity_holds(p)]
    return not bad, f"lambda identity on 30 draws (n = 1, 2, 3); {len(bad)} failures"


# 2 ---------------------------------------------------------------------------


def criterion_2():
    fails = []
    for n in (1, 2, 3):
        for p in draws(n, 5, seed=1):
            spec = CMOperatorSpec(p, 4)
            if not residual(spec, solve_eigenfunction(spec)).is_zero():
                fails.append((n, p))
    return not fails, f"(H - lambda) Y = 0 through D = 4, n = 1, 2, 3, 5 draws each; {len(fails)} failures"


# 3 ---------------------------------------------------------------------------


def fixed_point_scan():
    out = {"mass": [], "positive": [], "unit": [], "nonzero": [], "distinct": [], "points": 0}
    for n in (1, 2, 3):
        params = draws(n, 1, seed=2)[0]
        for size in range(5):
            for d in exponents_of_degree(n, size):
                for fp in enumerate_fixed_points(n, d):
                    out["points"] += 1
                    chi = tangent_character(fp)
                    if chi.mass() != 2 * size:
                        out["mass"].append(fp)
                    if any(c <= 0 for c in chi.terms.values()):
                        out["positive"].append(fp)
                    if any(c != 1 for c in chi.terms.values()):
                        out["unit"].append(fp)
                    ws = tangent_weights(n, fp, params)
                    if any(w == 0 for w in ws):
                        out["nonzero"].append(fp)
                    if len(set(ws)) != len(ws):
                        out["distinct"].append(fp)
    return out


def criterion_3_core():
    scan = fixed_point_scan()
    counts = [int(fixed_point_counts(1, 6).coefficient((k,))) for k in range(7)]
    ok = not scan["mass"] and not scan["positive"] and not scan["nonzero"] and counts == [1, 1, 2, 3, 5, 7, 11]
    return ok, scan, counts


def criterion_3():
    ok_core, scan, counts = criterion_3_core()
    ok = ok_core and not scan["unit"] and not scan["distinct"]
    first_unit = scan["unit"][0].to_dict() if scan["unit"] else None
    return ok, (
        f"{scan['points']} fixed points (n <= 3, |d| <= 4): rank 2|d| {'ok' if not scan['mass'] else 'FAILS'}, "
        f"positive {'ok' if not scan['positive'] else 'FAILS'}, nonzero weights "
        f"{'ok' if not scan['nonzero'] else 'FAILS'}, p(0..6) = {counts}; "
        f"all-+1 coefficients fails at {len(scan['unit'])} points (first {first_unit}), "
        f"pairwise-distinct weights fails at {len(scan['distinct'])} points"
    )


# 4 ---------------------------------------------------------------------------


def criterion_4():
    fails = []
    for n, bound in ((1, 6), (2, 4)):
        p0 = draws(n, 1, m=0, seed=3)[0]
        inv = series_inv(weyl_delta(n, bound))
        sides = {
            "localization": localization_partition_function(p0, bound),
            "reference": reference_partition_function(CMOperatorSpec(p0, bound)),
            "Tr(A(0) z)": trace_A(solve_intertwiner(p0, bound)),
            "Tr(B z)": trace_B(VermaModule(p0), bound),
        }
        fails += [f"{name} (n={n})" for name, s in sides.items() if s != inv]
    return not fails, f"four sides = inv(weyl_delta), n = 1 (D = 6), n = 2 (D = 4); failures: {fails or 'none'}"


# 5 ---------------------------------------------------------------------------


def criterion_5():
    labels = {resolve_ledger(F(2), seed).conventions for seed in range(5)}
    unique = labels == {DEFAULT_CONVENTIONS}
    fails = []
    checked = 0
    for m in (F(2), F(1, 2)):
        for n, bound in ((1, 4), (2, 3)):
            for p in draws(n, 3, m=m, seed=4):
                checked += 1
                loc = localization_partition_function(p, bound)
                ref = reference_partition_function(CMOperatorSpec(p, bound, DEFAULT_CONVENTIONS.variant))
                if loc != ref:
                    fails.append((n, m, describe(first_difference(loc, ref))))
    ok = unique and not fails
    return ok, (
        f"ledger resolves uniquely and stably to [{DEFAULT_CONVENTIONS.label()}] over 5 draws: {unique}; "
        f"localization = reference on {checked} cases (n=1 D<=4, n=2 D<=3, m in {{2, 1/2}}); {len(fails)} failures"
    )


# 6 ---------------------------------------------------------------------------

REP_PARAMS = draws(2, 2, m=F(2), seed=5)


def part_a():
    return group_to_matrix(b_element(4, 16), 3) == b_matrix_display(4, 3)


def part_b():
    return check_twist_conjugation(2, 3)[0]


def part_c():
    return ev_g_inverse(SModVector.top(2, F(2)), 3) == series_pow_rational(weyl_delta(2, 3), -2)


_PHI: dict = {}


def phi_for(p: EquivParams, bound: int):
    key = (p, bound)
    if key not in _PHI:
        _PHI[key] = solve_intertwiner(p, bound)
    return _PHI[key]


def part_d():
    return all(r.ok for p in REP_PARAMS for r in check_vertex_relations(p, 2, phi_for(p, 6), loop_orders=(1, 2)))


def part_e():
    return all(not d for p in REP_PARAMS for _, d in energy_differences(VermaModule(p), 2))


def part_f():
    return all(set(phi_for(p, 6).nullities.values()) == {1} for p in REP_PARAMS)


def part_g():
    diffs = [first_difference(trace_A(phi_for(p, 2)), localization_partition_function(p, 2)) for p in REP_PARAMS]
    return all(d is None for d in diffs), diffs


def part_h():
    diffs = []
    for p in REP_PARAMS:
        chi = intertwiner_character(phi_for(p, 2))
        y = solve_eigenfunction(CMOperatorSpec(p, 2)).Y.body * series_inv(weyl_delta(2, 2))
        diffs.append(first_difference(chi, y))
    return all(d is None for d in diffs), diffs


def part_i():
    return all(
        series_pow_rational(weyl_delta(2, 2), -p.m) * intertwiner_character(phi_for(p, 2)) == trace_A(phi_for(p, 2))
        for p in REP_PARAMS
    )


def criterion_6():
    status = {
        "a": part_a(),
        "b": part_b(),
        "c": part_c(),
        "d": part_d(),
        "e": part_e(),
        "f": part_f(),
    }
    g_ok, g_diffs = part_g()
    h_ok, h_diffs = part_h()
    status.update(g=g_ok, h=h_ok, i=part_i())
    failing = [k for k, v in status.items() if not v]
    text = " ".join(f"({k}) {'ok' if v else 'FAILS'}" for k, v in status.items())
    if not g_ok:
        text += f"; (g) {describe(next(d for d in g_diffs if d))}"
    if not h_ok:
        text += f"; (h) {describe(next(d for d in h_diffs if d))}"
    return not failing, text


# 7 ---------------------------------------------------------------------------


def criterion_7():
    pent = TruncatedSeries(1, 10, {(0,): 1, (1,): -1, (2,): -1, (5,): 1, (7,): 1})
    ok_pent = weyl_delta(1, 10) == pent
    rng = random.Random(11)

    def rand(unit=True):
        terms = {(0, 0): 1} if unit else {}
        for e in exponents_up_to(2, 3):
            if sum(e) and rng.random() < 0.35:
                terms[e] = F(rng.randint(-9, 9), rng.randint(1, 9))
        return TruncatedSeries(2, 3, terms)

    ok_laws = True
    ok_oracle = True
    for _ in range(20):
        a, b, c = rand(), rand(), rand(False)
        p, q = F(rng.randint(-9, 9), rng.randint(1, 9)), F(rng.randint(-9, 9), rng.randint(1, 9))
        ok_laws &= (a * b) * c == a * (b * c) and a * series_inv(a) == TruncatedSeries.one(2, 3)
        ok_laws &= series_pow_rational(a, p) * series_pow_rational(a, q) == series_pow_rational(a, p + q)
        for k in range(-3, 4):
            ok_oracle &= series_pow_rational(a, k) == (a ** k if k >= 0 else series_inv(a) ** (-k))
    ok = ok_pent and ok_laws and ok_oracle
    return ok, f"pentagonal {ok_pent}, ring/inverse/power laws on 20 series {ok_laws}, integer-power oracle {ok_oracle}"


CRITERIA = {
    "1 lambda identity": criterion_1,
    "2 eigen residual": criterion_2,
    "3 fixed-point suite": criterion_3,
    "4 m=0 degeneration": criterion_4,
    "5 main theorem": criterion_5,
    "6 representation suite": criterion_6,
    "7 series engine": criterion_7,
}


def run_criterion(key: str) -> bool:
    start = time.perf_counter()
    ok, text = CRITERIA[key]()
    record(key, ok, f"{text} [{time.perf_counter() - start:.1f}s]")
    return ok


# pytest entry points ------------------------------------------------------------


def test_criterion_1_lambda_identity():
    assert run_criterion("1 lambda identity")


def test_criterion_2_eigen_residual():
    assert run_criterion("2 eigen residual")


def test_criterion_3_fixed_point_suite_line():
    # prints the full line; the attainable core is asserted here, the false claims below
    run_criterion("3 fixed-point suite")
    ok_core, _, _ = criterion_3_core()
    assert ok_core


@pytest.mark.xfail(strict=True, reason="tangent characters have repeated weights, e.g. the Hilbert scheme at (2,1)")
def test_criterion_3_all_unit_coefficients():
    assert not fixed_point_scan()["unit"]


@pytest.mark.xfail(strict=True, reason="repeated characters give repeated weights at every parameter value")
def test_criterion_3_pairwise_distinct_weights():
    assert not fixed_point_scan()["distinct"]


def test_criterion_4_degeneration():
    assert run_criterion("4 m=0 degeneration")


def test_criterion_5_main_theorem():
    assert run_criterion("5 main theorem")


def test_criterion_6_representation_suite_line():
    run_criterion("6 representation suite")
    assert all(f() for f in (part_a, part_b, part_c, part_d, part_e, part_f, part_i))


@pytest.mark.xfail(strict=True, reason="Verma trace differs from localization on the imaginary root (1,1)")
def test_criterion_6g_trace_bridge():
    assert part_g()[0]


@pytest.mark.xfail(strict=True, reason="intertwiner character differs from Y/delta on the imaginary root (1,1)")
def test_criterion_6h_character_formula():
    assert part_h()[0]


def test_criterion_7_series_engine():
    assert run_criterion("7 series engine")


# evidence for the failing parts ---------------------------------------------------


def imaginary(e) -> bool:
    return len(set(e)) == 1 and e[0] > 0


def test_trace_bridge_holds_off_the_imaginary_root():
    for p in REP_PARAMS:
        tr = trace_A(phi_for(p, 2))
        loc = localization_partition_function(p, 2)
        bad = [e for e in exponents_up_to(2, 2) if tr.coefficient(e) != loc.coefficient(e)]
        assert bad == [(1, 1)]


def test_rank_one_trace_is_a_delta_power():
    # Tr(A z) = delta^{-1-m+m^2/L} with L the Heisenberg level [a+_k, a-_k] = kL
    for m in (F(2), F(1, 2)):
        p = EquivParams(1, [F(2, 7)], F(3, 5), m)
        for level in (None, F(-7, 3)):
            mod = VermaModule(p, loop_level=level)
            tr = trace_A(solve_intertwiner(p, 5, mod))
            L = mod.loop_level
            assert tr == series_pow_rational(weyl_delta(1, 5), -1 - m + m * m / L)


def test_no_fixed_level_matches_geometry():
    # geometry needs L = -n^2 m eta / (m + 1), which moves with m; the standard cocycle gives n c
    n = 2
    p = REP_PARAMS[0]
    needed = {}
    for m in (F(2), F(1, 2)):
        q = p.with_m(m)
        level = -n * n * m * q.eta / (m + 1)
        mod = VermaModule(q, loop_level=level)
        assert trace_A(solve_intertwiner(q, 2, mod)) == localization_partition_function(q, 2)
        assert trace_A(solve_intertwiner(q, 2)) != localization_partition_function(q, 2)
        needed[m] = level
    assert needed[F(2)] != needed[F(1, 2)]


def test_A_zero_is_B_in_suite_params():
    p0 = REP_PARAMS[0].with_m(0)
    phi0 = solve_intertwiner(p0, 2)
    for u in pbw_basis_up_to(2, 2):
        assert operator_A({u: F(1)}, phi0) == phi0.module.apply_B({u: F(1)})


if __name__ == "__main__":
    results = [run_criterion(key) for key in CRITERIA]
    sys.exit(0 if all(results) else 1)
