"""Subgroup cosets, difference sets, and translation degrees."""

import numpy as np
import pytest

from groupframes.errors import BadShape, NotADivisor, ZeroElement
from groupframes.gf import build_field
from groupframes.subgroups import (
    ZERO,
    coset_of,
    is_difference_set,
    parity_of_minus_one,
    subgroup_of_order,
    translation_degree,
)


def test_f7_quadratic_residues():
    ctx = build_field(7, 1)
    spec = subgroup_of_order(ctx, 3)
    assert spec.kappa == 2
    assert sorted(spec.element_values.tolist()) == [1, 2, 4]
    # 7 = 3 mod 4, so the residues form a Paley difference set
    assert is_difference_set(spec) == (True, 1)


def test_f11_paley():
    ctx = build_field(11, 1)
    spec = subgroup_of_order(ctx, 5)
    assert sorted(spec.element_values.tolist()) == [1, 3, 4, 5, 9]
    assert is_difference_set(spec) == (True, 2)


def test_subgroup_closure_and_identity():
    ctx = build_field(3, 3)
    spec = subgroup_of_order(ctx, 13)
    vals = set(int(v) for v in spec.element_values)
    assert 1 in vals
    for a in spec.elements:
        for b in spec.elements:
            assert (a * b).value in vals


def test_subgroup_of_order_rejects_nondivisor():
    ctx = build_field(7, 1)
    with pytest.raises(NotADivisor):
        subgroup_of_order(ctx, 4)
    with pytest.raises(NotADivisor):
        subgroup_of_order(ctx, 0)


def test_coset_partition():
    ctx = build_field(3, 2)
    spec = subgroup_of_order(ctx, 2)  # kappa = 4
    seen = set()
    for d in range(spec.kappa):
        cv = spec.coset_values(d)
        assert len(cv) == 2
        seen.update(int(v) for v in cv)
    assert seen == set(range(1, 9))
    with pytest.raises(BadShape):
        spec.coset_values(4)


def test_coset_of_matches_enumeration():
    ctx = build_field(13, 1)
    spec = subgroup_of_order(ctx, 3)
    for d in range(spec.kappa):
        for v in spec.coset_values(d):
            assert coset_of(spec, ctx.from_value(int(v))) == d
    with pytest.raises(ZeroElement):
        coset_of(spec, ctx.zero)


def test_is_difference_set_against_direct_count():
    # independent census with python sets/dicts
    for p, r, m in [(7, 1, 3), (13, 1, 4), (11, 1, 5), (3, 2, 4), (19, 1, 9)]:
        ctx = build_field(p, r)
        spec = subgroup_of_order(ctx, m)
        els = spec.elements
        counts = {}
        for a in els:
            for b in els:
                d = (a - b).value
                if d:
                    counts[d] = counts.get(d, 0) + 1
        lams = set(counts.values())
        full = len(counts) == ctx.n - 1 and len(lams) == 1
        expect = (True, lams.pop()) if full else (False, None)
        assert is_difference_set(spec) == expect


@pytest.mark.parametrize("p,r,m", [(7, 1, 3), (11, 1, 5), (3, 3, 13),
                                   (19, 1, 9), (23, 1, 11), (3, 5, 121),
                                   (7, 3, 171)])
def test_paley_kappa2_is_difference_set(p, r, m):
    # p^r = 3 mod 4 and m = (p^r - 1)/2: the classical Paley design
    ctx = build_field(p, r)
    assert ctx.n % 4 == 3
    spec = subgroup_of_order(ctx, m)
    assert spec.kappa == 2
    ok, lam = is_difference_set(spec)
    assert ok
    assert lam == (ctx.n - 3) // 4


def test_translation_degree_zero_semantics():
    ctx = build_field(7, 1)
    spec = subgroup_of_order(ctx, 3)
    assert translation_degree(spec, ZERO, ZERO) == 0
    # 0 + 1 = 1 lies in A = coset 0
    assert translation_degree(spec, ZERO, 0) == 1
    assert translation_degree(spec, ZERO, 1) == 0
    # -1 = 6 is in coset 1 (6 is not a QR mod 7); 6 + 1 = 0
    assert translation_degree(spec, 1, ZERO) == 1
    assert translation_degree(spec, 0, ZERO) == 0
    with pytest.raises(BadShape):
        translation_degree(spec, 2, 0)


@pytest.mark.parametrize("p,r,m", [(7, 1, 3), (13, 1, 4), (3, 3, 13),
                                   (11, 1, 5), (5, 2, 8)])
def test_translation_degree_row_sums(p, r, m):
    # every element of a coset lands somewhere after adding one
    ctx = build_field(p, r)
    spec = subgroup_of_order(ctx, m)
    targets = list(range(spec.kappa)) + [ZERO]
    for s in range(spec.kappa):
        assert sum(translation_degree(spec, s, t) for t in targets) == m


def test_translation_degree_direct_count():
    ctx = build_field(13, 1)
    spec = subgroup_of_order(ctx, 6)
    for s in range(spec.kappa):
        for t in range(spec.kappa):
            direct = 0
            for v in spec.coset_values(s):
                w = ctx.from_value(int(v)) + ctx.one
                if not w.is_zero() and coset_of(spec, w) == t:
                    direct += 1
            assert translation_degree(spec, s, t) == direct


@pytest.mark.parametrize("p,r", [(3, 2), (5, 2), (7, 1), (11, 1), (13, 1),
                                 (3, 4), (2, 6)])
def test_parity_of_minus_one(p, r):
    ctx = build_field(p, r)
    minus_one = ctx.neg(ctx.one)
    order = ctx.n - 1
    for m in range(1, order + 1):
        if order % m:
            continue
        spec = subgroup_of_order(ctx, m)
        info = parity_of_minus_one(spec)
        in_a = minus_one.value in set(int(v) for v in spec.element_values)
        assert info["in_A"] == in_a
        if not in_a:
            assert coset_of(spec, minus_one) == info["coset"]
        if p != 2 and m % 2 == 1 and ctx.n % 2 == 1:
            # odd subgroup of the odd-characteristic field: -1 sits half way
            assert info["is_half_kappa"]


def test_element_values_match_logs():
    ctx = build_field(2, 5)
    spec = subgroup_of_order(ctx, 31)
    assert np.array_equal(spec.element_values,
                          ctx.value_of_exp[spec.element_logs])
