"""Command-line driver: runs the geometric, Calogero-Moser and Verma routes and cross-checks them.

Usage::

    laumon --mode verify --n 2 --degree 2 --m 2 --seed 3 --out report.json
    laumon --config run.cfg --mode localization

The config file is flat ``key = value`` text (``#`` starts a comment); flags
override it.  Missing ``xi``/``eta`` are drawn from ``seed``.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from laumon.affine import b_element, b_matrix_display, check_twist_conjugation, group_to_matrix
from laumon.calogero import CMOperatorSpec, reference_partition_function, solve_eigenfunction
from laumon.errors import LaumonError
from laumon.geometry import Conventions, EquivParams, fixed_point_counts, localization_partition_function
from laumon.series import (
    TruncatedSeries,
    format_scalar,
    parse_scalar,
    series_inv,
    series_pow_rational,
    weyl_delta,
)
from laumon.verify import (
    CheckRecord,
    compare_series,
    eigen_residual_check,
    fixed_point_report,
    guarded,
    lambda_identity_holds,
    random_params,
    resolve_ledger,
)
from laumon.verma import (
    SModVector,
    VermaModule,
    check_vertex_relations,
    energy_differences,
    ev_g_inverse,
    ev_g_inverse_direct,
    intertwiner_character,
    operator_A,
    pbw_basis_up_to,
    solve_intertwiner,
    trace_A,
    trace_B,
)

log = logging.getLogger("laumon")

MODES = ("localization", "eigen", "verma", "verify")


@dataclass
class RunConfig:
    n: int = 1
    D: int = 2
    m: Fraction = Fraction(2)
    xi: list[Fraction] | None = None
    eta: Fraction | None = None
    mode: str = "verify"
    ledger: str = "auto"
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        self.m = parse_scalar(self.m)
        if self.xi is not None:
            self.xi = [parse_scalar(x) for x in self.xi]
        if self.eta is not None:
            self.eta = parse_scalar(self.eta)
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.D < 0:
            raise ValueError("degree must be >= 0")
        if self.xi is not None and len(self.xi) != self.n:
            raise ValueError(f"xi has {len(self.xi)} entries, expected {self.n}")
        if self.eta == 0:
            raise ValueError("eta must be nonzero")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    def params(self) -> EquivParams:
        """Explicit parameters, with any missing xi/eta drawn from the seed."""
        drawn = random_params(random.Random(self.seed), self.n, self.m)
        xi = self.xi if self.xi is not None else drawn.xi
        eta = self.eta if self.eta is not None else drawn.eta
        return EquivParams(self.n, xi, eta, self.m)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.D,
            "m": format_scalar(self.m),
            "xi": None if self.xi is None else [format_scalar(x) for x in self.xi],
            "eta": None if self.eta is None else format_scalar(self.eta),
            "mode": self.mode,
            "ledger": self.ledger,
            "seed": self.seed,
            "out": self.out,
        }


def _split_list(text: str) -> list[str]:
    return [p for p in text.replace(",", " ").split() if p]


def read_config_file(path: str | Path) -> dict[str, str]:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {raw!r}")
        values[key.strip().lower()] = value.strip()
    return values


_KEYS = {"n": "n", "degree": "D", "d": "D", "m": "m", "xi": "xi", "eta": "eta", "mode": "mode",
         "ledger": "ledger", "seed": "seed", "out": "out"}


def build_config(file_values: dict[str, str], overrides: dict[str, object]) -> RunConfig:
    raw: dict[str, object] = {}
    for key, value in file_values.items():
        if key not in _KEYS:
            raise ValueError(f"unknown config key {key!r}")
        raw[_KEYS[key]] = value
    for key, value in overrides.items():
        if value is not None:
            raw[_KEYS[key]] = value
    if isinstance(raw.get("xi"), str):
        raw["xi"] = _split_list(raw["xi"])
    for key in ("n", "D", "seed"):
        if key in raw:
            raw[key] = int(raw[key])
    return RunConfig(**raw)


# report ------------------------------------------------------------------------


@dataclass
class Report:
    config: dict
    params: dict
    ledger: dict
    tables: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "params": self.params,
            "ledger": self.ledger,
            "tables": self.tables,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "timing": self.timing,
        }


def _timed(report: Report, key: str, fn: Callable):
    start = time.perf_counter()
    try:
        return fn()
    finally:
        report.timing[key] = round(time.perf_counter() - start, 4)


def _ledger(config: RunConfig) -> tuple[Conventions, dict]:
    if config.ledger == "auto":
        res = resolve_ledger(config.m if config.m else Fraction(2), config.seed)
        return res.conventions, res.to_dict()
    conv = Conventions.parse(config.ledger)
    return conv, {"resolved": conv.to_dict(), "label": conv.label(), "evidence": []}


# the three routes ----------------------------------------------------------------


def localization_route(params: EquivParams, bound: int, conv: Conventions) -> TruncatedSeries:
    return localization_partition_function(params, bound, conv)


def eigen_route(params: EquivParams, bound: int, conv: Conventions) -> TruncatedSeries:
    return reference_partition_function(CMOperatorSpec(params, bound, conv.variant))


def verma_route(params: EquivParams, bound: int, conv: Conventions) -> TruncatedSeries:
    module = VermaModule(params, conventions=conv)
    return trace_A(solve_intertwiner(params, bound, module))


ROUTES = {"localization": localization_route, "eigen": eigen_route, "verma": verma_route}


# the invariant suites --------------------------------------------------------------


def _check(name: str, ok: bool, lhs=None, rhs=None, detail: str = "") -> CheckRecord:
    return CheckRecord(name, bool(ok), lhs, rhs, detail=detail)


def series_suite(config: RunConfig) -> list[CheckRecord]:
    rng = random.Random(config.seed)
    n, bound = config.n, max(config.D, 1)
    out = []
    # Euler's pentagonal number theorem for prod (1 - z^k)
    pent = {}
    k = 0
    while True:
        done = True
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g <= 10:
                pent[(g,)] = Fraction((-1) ** k)
                done = False
        if done:
            break
        k += 1
    out.append(compare_series("series: pentagonal numbers", weyl_delta(1, 10), TruncatedSeries(1, 10, pent)))

    def rand_series(unit: bool) -> TruncatedSeries:
        s = TruncatedSeries.one(n, bound) if unit else TruncatedSeries.zero(n, bound)
        for _ in range(4):
            e = tuple(rng.randint(0, bound) for _ in range(n))
            if 0 < sum(e) <= bound:
                s = s + TruncatedSeries.monomial(n, bound, e, Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        return s

    laws = True
    for _ in range(20):
        a, b, c = rand_series(True), rand_series(True), rand_series(False)
        laws &= (a * b) * c == a * (b * c) and a * b == b * a and a * (b + c) == a * b + a * c
        laws &= a * series_inv(a) == TruncatedSeries.one(n, bound)
        laws &= series_pow_rational(a, Fraction(1, 2)) ** 2 == a
        laws &= series_pow_rational(a, Fraction(-3)) == series_inv(a) ** 3
    out.append(_check("series: ring, inverse and power laws (20 draws)", laws))
    a = rand_series(True)
    oracle = all(series_pow_rational(a, k) == (a ** k if k >= 0 else series_inv(a) ** -k) for k in range(-3, 4))
    out.append(_check("series: rational power agrees with integer powers", oracle))
    return out


def fixed_point_suite(params: EquivParams, bound: int, conv: Conventions) -> list[CheckRecord]:
    n = params.n
    stats = fixed_point_report(n, bound, params, conv)
    w = stats["witnesses"]
    counts = fixed_point_counts(n, bound)
    inv = series_inv(weyl_delta(n, bound))
    return [
        _check("fixed points: tangent rank 2|d|", stats["mass_ok"], detail=str(w.get("mass_ok", ""))),
        _check("fixed points: tangent coefficients positive", stats["positive"], detail=str(w.get("positive", ""))),
        _check("fixed points: tangent coefficients all +1", stats["all_unit"], detail=str(w.get("all_unit", ""))),
        _check("fixed points: weights nonzero", stats["nonzero"], detail=str(w.get("nonzero", ""))),
        _check("fixed points: weights pairwise distinct", stats["distinct"], detail=str(w.get("distinct", ""))),
        compare_series("fixed points: counts = inv(weyl_delta)", counts, inv),
    ]


def degeneration_suite(params: EquivParams, bound: int, conv: Conventions) -> list[CheckRecord]:
    p0 = params.with_m(0)
    inv = series_inv(weyl_delta(params.n, bound))
    out = []
    for name, route in ROUTES.items():
        out.append(guarded(f"m=0: {name} = inv(weyl_delta)", lambda r=route: compare_series(
            f"m=0: {name} = inv(weyl_delta)", r(p0, bound, conv), inv)))
    out.append(compare_series("m=0: Tr(B z) = inv(weyl_delta)", trace_B(VermaModule(p0, conventions=conv), bound), inv))
    return out


def representation_suite(params: EquivParams, bound: int, conv: Conventions) -> list[CheckRecord]:
    n, m = params.n, params.m
    out = []
    loop_degree = 3
    b = b_element(4, 4 * (loop_degree + 1))
    out.append(_check("B display (n=4)", group_to_matrix(b, loop_degree) == b_matrix_display(4, loop_degree)))
    ok, failing = check_twist_conjugation(n, max(bound, 3))
    out.append(_check("twist conjugation g^-1 twist(g) = B", ok, detail=f"failing windows {failing}" if failing else ""))
    top = SModVector.top(n, m)
    ev_bound = max(bound, 3)
    delta_m = series_pow_rational(weyl_delta(n, ev_bound), -m)
    out.append(compare_series("ev(g^-1 y^m) = weyl_delta^-m", ev_g_inverse(top, ev_bound), delta_m))
    if m.denominator == 1:
        out.append(compare_series("ev(g^-1 y^m): rational vs integer powers", ev_g_inverse(top, ev_bound),
                                  ev_g_inverse_direct(top, ev_bound)))

    module = VermaModule(params, conventions=conv)
    loop_orders = (1, 2)

    def intertwiner():
        return solve_intertwiner(params, bound + n * max(loop_orders), module)

    phi = None
    try:
        phi = intertwiner()
        out.append(_check("intertwiner solution spaces 1-dimensional", True, detail=str(phi.nullities)))
    except LaumonError as exc:
        out.append(_check("intertwiner solution spaces 1-dimensional", False, detail=f"{type(exc).__name__}: {exc}"))
    if phi is not None:
        recs = check_vertex_relations(params, bound, phi, loop_orders)
        bad = [r.to_dict() for r in recs if not r.ok]
        out.append(_check(f"vertex relations ({len(recs)} evaluations)", not bad, detail=json.dumps(bad[:3])))
    diffs = [(u, d) for u, d in energy_differences(module, bound) if d]
    out.append(_check("energy eigenvalue differences (1 + c/n)|d|", not diffs, detail=str(diffs[:3])))
    if phi is not None:
        tr = trace_A(phi, bound)
        loc = localization_partition_function(params, bound, conv)
        out.append(compare_series("Tr(A z) = localization", tr, loc))
        chi = intertwiner_character(phi, bound)
        spec = CMOperatorSpec(params, bound, conv.variant)
        out.append(guarded("chi_Phi = Y / weyl_delta", lambda: compare_series(
            "chi_Phi = Y / weyl_delta", chi, solve_eigenfunction(spec).Y.body * series_inv(weyl_delta(n, bound)))))
        out.append(compare_series("weyl_delta^-m chi_Phi = Tr(A z)",
                                  series_pow_rational(weyl_delta(n, bound), -m) * chi, tr))
        p0 = params.with_m(0)
        phi0 = solve_intertwiner(p0, bound, VermaModule(p0, conventions=conv))
        same = all(
            operator_A({u: Fraction(1)}, phi0) == phi0.module.apply_B({u: Fraction(1)})
            for u in pbw_basis_up_to(n, bound)
        )
        out.append(_check("A(0) = B", same))
    return out


# orchestration -------------------------------------------------------------------


def run(config: RunConfig) -> Report:
    config.validate()
    params = config.params()
    report = Report(config.to_dict(), params.to_dict(), {})
    conv, ledger = _timed(report, "ledger", lambda: _ledger(config))
    report.ledger = ledger
    bound = config.D
    if config.mode in ROUTES:
        route = ROUTES[config.mode]
        rec = _timed(report, config.mode, lambda: guarded(config.mode, lambda: CheckRecord(
            config.mode, True, route(params, bound, conv))))
        if rec.lhs is not None:
            report.tables[config.mode] = rec.lhs.to_records()
        else:
            report.checks.append(rec)
        return report

    series = {}
    for name, route in ROUTES.items():
        rec = _timed(report, name, lambda r=route, nm=name: guarded(nm, lambda: CheckRecord(nm, True, r(params, bound, conv))))
        if rec.lhs is None:
            report.checks.append(rec)
        else:
            series[name] = rec.lhs
            report.tables[name] = rec.lhs.to_records()
    checks = report.checks
    checks.append(_check("lambda identity", lambda_identity_holds(params)))
    checks.append(_timed(report, "residual", lambda: eigen_residual_check(params, bound, conv.variant)))
    for a, b in (("localization", "eigen"), ("localization", "verma"), ("eigen", "verma")):
        if a in series and b in series:
            checks.append(compare_series(f"{a} = {b}", series[a], series[b]))
    suites = (
        ("fixed_points", lambda: fixed_point_suite(params, bound, conv)),
        ("degeneration", lambda: degeneration_suite(params, bound, conv)),
        ("representation", lambda: representation_suite(params, bound, conv)),
        ("series", lambda: series_suite(config)),
    )
    for key, suite in suites:
        checks.extend(_timed(report, key, lambda s=suite, k=key: _run_suite(k, s)))
    return report


def _run_suite(name: str, suite: Callable[[], list[CheckRecord]]) -> list[CheckRecord]:
    """A suite that hits non-generic parameters contributes one failed record instead of aborting the run."""
    try:
        return suite()
    except LaumonError as exc:
        degree = getattr(exc, "degree", None)
        return [CheckRecord(f"{name} suite", False, degree=list(degree) if degree else None,
                            detail=f"{type(exc).__name__}: {exc}")]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="laumon", description="Affine Laumon partition functions, three ways.")
    ap.add_argument("--config", help="flat key=value config file")
    ap.add_argument("--n", type=int)
    ap.add_argument("--degree", type=int, help="total-degree truncation D")
    ap.add_argument("--m", help="rational m, e.g. 1/2")
    ap.add_argument("--xi", help="comma-separated rationals, one per residue")
    ap.add_argument("--eta", help="rational eta")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--ledger", help="'auto' or key=value conventions, e.g. variant=C,qprime_scale=n")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="JSON report path (default: stdout)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {k: getattr(args, k) for k in ("n", "degree", "m", "xi", "eta", "mode", "ledger", "seed", "out")}
    try:
        config = build_config(file_values, overrides)
    except ValueError as exc:
        print(f"laumon: {exc}", file=sys.stderr)
        return 2
    report = run(config)
    for rec in report.checks:
        log.info("%s %s %s", "PASS" if rec.passed else "FAIL", rec.name, rec.detail)
    text = json.dumps(report.to_dict(), indent=2)
    if config.out:
        Path(config.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
