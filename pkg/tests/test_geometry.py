from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import draws
from laumon.errors import DimensionError, NonGenericParametersError
from laumon.geometry import (
    CharacterPolynomial,
    Conventions,
    DEFAULT_CONVENTIONS,
    EquivParams,
    FixedPoint,
    brute_force_fixed_points,
    enumerate_fixed_points,
    fixed_point_counts,
    fixed_point_degree,
    localization_coefficient,
    localization_partition_function,
    rhom_character,
    tangent_character,
    tangent_weights,
)
from laumon.series import TruncatedSeries, exponents_of_degree, exponents_up_to, series_inv, series_pow_rational, weyl_delta

F = Fraction


def rotate(d, k=1):
    return d[-k:] + d[:-k]


# parameters and conventions


def test_params_validation():
    p = EquivParams(2, ["1/2", 3], "-1/3", "2")
    assert p.xi == (F(1, 2), F(3)) and p.eta == F(-1, 3) and p.m == 2
    assert p.with_m(0).m == 0 and p.with_m(0).xi == p.xi
    with pytest.raises(DimensionError):
        EquivParams(2, [1], 1)
    with pytest.raises(DimensionError):
        EquivParams(0, [], 1)


def test_conventions_parse_and_label():
    c = Conventions.parse("variant=A, shift_sign=-1, swap_q=1")
    assert (c.variant, c.shift_sign, c.swap_q, c.dualize) == ("A", -1, True, False)
    assert Conventions.parse(DEFAULT_CONVENTIONS.label()) == DEFAULT_CONVENTIONS
    with pytest.raises(ValueError):
        Conventions.parse("colour=blue")
    with pytest.raises(ValueError):
        Conventions(variant="Z")


def test_q_weights():
    p = EquivParams(3, [0, 0, 0], F(2, 5))
    assert DEFAULT_CONVENTIONS.q_weights(p) == (1, F(6, 5))
    assert Conventions(qprime_scale="1").q_weights(p) == (1, F(2, 5))
    assert Conventions(swap_q=True).q_weights(p) == (F(6, 5), 1)


# fixed points


def test_fixed_points_degree_zero():
    for n in (1, 2, 3):
        (fp,) = enumerate_fixed_points(n, (0,) * n)
        assert fp.columns == ((),) * n and fp.size == 0


def test_fixed_points_partitions_of_three():
    got = {fp.columns[0] for fp in enumerate_fixed_points(1, (3,))}
    assert got == {(3,), (2, 1), (1, 1, 1)}


@pytest.mark.parametrize("n,d", [(2, (1, 0)), (2, (0, 1)), (2, (1, 1)), (2, (2, 1)), (3, (1, 0, 1)), (1, (4,))])
def test_enumeration_matches_brute_force(n, d):
    fast = {fp.columns for fp in enumerate_fixed_points(n, d)}
    slow = {fp.columns for fp in brute_force_fixed_points(n, d)}
    assert fast == slow
    assert len(fast) == len(enumerate_fixed_points(n, d))


def test_fixed_point_degree_examples():
    assert fixed_point_degree(FixedPoint(2, ((), ()))) == (0, 0)
    assert fixed_point_degree(FixedPoint(1, ((2, 1),))) == (3,)
    assert fixed_point_degree(FixedPoint(2, ((1,), ()))) == (1, 0)
    # entry in column l, row r counts towards residue r mod n
    assert fixed_point_degree(FixedPoint(3, ((2, 1, 1), (), (1,)))) == (2, 1, 2)


def test_fixed_point_validation_and_serialization():
    with pytest.raises(ValueError):
        FixedPoint(1, ((1, 2),))
    fp = FixedPoint(2, ((2, 1), (1,)))
    assert FixedPoint.from_dict(fp.to_dict()) == fp
    assert fp.entry(1, 1) == 2 and fp.entry(2, 1) == 1 and fp.entry(3, 3) == 2 and fp.entry(0, 1) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_degree_round_trip_and_rotation_symmetry(n):
    for size in range(5 if n < 3 else 4):
        for d in exponents_of_degree(n, size):
            fps = enumerate_fixed_points(n, d)
            assert all(fixed_point_degree(fp) == d for fp in fps)
            assert len(fps) == len(enumerate_fixed_points(n, rotate(d)))


def test_partition_numbers():
    assert [fixed_point_counts(1, 6).coefficient((k,)) for k in range(7)] == [1, 1, 2, 3, 5, 7, 11]


# characters


def test_rhom_character_examples():
    empty = FixedPoint(1, ((),))
    assert rhom_character(1, empty, empty) == CharacterPolynomial(1)
    box = FixedPoint(1, ((1,),))
    assert rhom_character(1, box, box) == CharacterPolynomial(1, {((0,), 1, 0): -1, ((0,), 0, 1): -1})
    two = FixedPoint(1, ((2,),))
    neg = -rhom_character(1, two, two)
    assert len(neg.terms) == 4 and set(neg.terms.values()) == {1}


def test_character_records():
    box = FixedPoint(1, ((1,),))
    recs = tangent_character(box).to_records()
    assert recs == [{"t": [0], "q": 0, "qp": 1, "c": 1}, {"t": [0], "q": 1, "qp": 0, "c": 1}]


@pytest.mark.parametrize("n,top", [(1, 4), (2, 4), (3, 4)])
def test_tangent_rank_and_positivity(n, top):
    for size in range(top + 1):
        for d in exponents_of_degree(n, size):
            for fp in enumerate_fixed_points(n, d):
                chi = tangent_character(fp)
                assert chi.mass() == 2 * size
                assert all(c > 0 for c in chi.terms.values())


def test_tangent_character_can_repeat_weights():
    # Hilbert scheme of 3 points at the partition (2,1): q and q' each occur twice
    fp = FixedPoint(1, ((2, 1),))
    chi = tangent_character(fp)
    assert chi.terms[((0,), 1, 0)] == 2 and chi.terms[((0,), 0, 1)] == 2
    # rank 2, d = (1,1): the q weight is doubled at the point with one box per column
    chi2 = tangent_character(FixedPoint(2, ((1,), (1,))))
    assert chi2.terms[((0, 0), 1, 0)] == 2


def test_character_is_linear():
    a = FixedPoint(2, ((1,), ()))
    b = FixedPoint(2, ((), (1, 1)))
    assert (rhom_character(2, a, b) + -rhom_character(2, a, b)).terms == {}


# weights


def test_tangent_weights_examples():
    p = EquivParams(1, [F(5, 7)], F(-3, 4))
    assert tangent_weights(1, FixedPoint(1, ((),)), p) == []
    assert sorted(tangent_weights(1, FixedPoint(1, ((1,),)), p)) == sorted([F(1), F(-3, 4)])


def test_tangent_weights_length():
    for p in draws(2, 2):
        for d in exponents_up_to(2, 3):
            for fp in enumerate_fixed_points(2, d):
                assert len(tangent_weights(2, fp, p)) == 2 * sum(d)


def test_zero_weight_is_non_generic():
    fp = FixedPoint(2, ((1,), ()))
    # weights are q * t2/t1 and q; make the first vanish
    p = EquivParams(2, [F(1), F(0)], F(1, 3))
    with pytest.raises(NonGenericParametersError):
        tangent_weights(2, fp, p)


def test_dualize_negates():
    p = EquivParams(2, [F(1, 3), F(2, 9)], F(5, 4))
    fp = FixedPoint(2, ((2,), (1,)))
    plain = tangent_weights(2, fp, p)
    dual = tangent_weights(2, fp, p, Conventions(dualize=True))
    assert sorted(dual) == sorted(-w for w in plain)


# localization


def test_localization_constant_term():
    for p in draws(2, 3, m=F(1, 2)):
        assert localization_partition_function(p, 2).coefficient((0, 0)) == 1


@pytest.mark.parametrize("n,bound", [(1, 6), (2, 4)])
def test_m_zero_counts(n, bound):
    p = draws(n, 1, m=0)[0]
    z = localization_partition_function(p, bound)
    assert z == fixed_point_counts(n, bound) == series_inv(weyl_delta(n, bound))


@given(st.fractions(-4, 4, max_denominator=6), st.fractions(-4, 4, max_denominator=6).filter(bool))
def test_single_box(m, eta):
    p = EquivParams(1, [F(1, 3)], eta, m)
    assert localization_coefficient(p, (1,)) == (1 + m) * (eta + m) / eta


def test_rank_one_closed_form():
    # rank one: Z = prod_k (1 - z^k)^{-(m+1)(m+eta)/eta}
    for p in draws(1, 3, m=F(3, 2)):
        expected = series_pow_rational(weyl_delta(1, 5), -(p.m + 1) * (p.m + p.eta) / p.eta)
        assert localization_partition_function(p, 5) == expected


def test_localization_series_type():
    p = draws(2, 1, m=2)[0]
    z = localization_partition_function(p, 2)
    assert isinstance(z, TruncatedSeries) and z.n == 2 and z.bound == 2
