from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetaforge.partitions import (
    HORIZONTAL,
    VERTICAL,
    Partition,
    add_strips,
    arm_leg_hook,
    conjugate,
    dominance_leq,
    odd_columns,
    odd_rows,
    parse_partition,
    partitions_of,
    partitions_up_to,
    strip_test,
    sub_strips,
)

# p(0..12), from the generating function prod 1/(1 - x^k)
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]

partitions = st.integers(0, 9).flatmap(lambda d: st.sampled_from(partitions_of(d)))


def test_counts():
    assert [len(partitions_of(d)) for d in range(13)] == PARTITION_COUNTS


def test_normalisation_and_validation():
    assert Partition([6, 3, 3, 1, 0, 0]) == Partition([6, 3, 3, 1])
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])
    assert parse_partition("[6,3,3,1]") == Partition([6, 3, 3, 1])


def test_odd_columns_and_rows():
    lam = Partition([6, 3, 3, 1])
    # columns have lengths 4, 3, 3, 1, 1, 1
    assert conjugate(lam) == Partition([4, 3, 3, 1, 1, 1])
    assert odd_columns(lam) == 5
    assert odd_rows(lam) == 3


def test_arm_leg_hook():
    lam = Partition([3, 1])
    assert arm_leg_hook(lam, (1, 1)) == (2, 1, 4)
    assert arm_leg_hook(lam, (1, 3)) == (0, 0, 1)


@given(partitions)
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sum(conjugate(lam)) == sum(lam)


@given(partitions)
def test_hook_lengths_sum(lam):
    # sum of hooks = sum_i (lam_i choose 2) + (lam'_i choose 2) + |lam|
    hooks = sum(arm_leg_hook(lam, c)[2] for c in lam.cells())
    lc = conjugate(lam)
    expect = sum(a * (a - 1) // 2 for a in lam) + sum(a * (a - 1) // 2 for a in lc) + sum(lam)
    assert hooks == expect


def _brute_strips(mu, r, kind):
    out = set()
    n = len(mu) + r
    for bump in product(range(r + 1), repeat=n):
        if sum(bump) != r:
            continue
        parts = [mu.part(i + 1) + bump[i] for i in range(n)]
        if any(a < b for a, b in zip(parts, parts[1:])):
            continue
        lam = Partition(parts)
        mu_pad = [mu.part(i + 1) for i in range(n)]
        if kind == VERTICAL and max(bump, default=0) > 1:
            continue
        if kind == HORIZONTAL and any(parts[i + 1] > mu_pad[i] for i in range(n - 1)):
            continue
        out.add(lam)
    return out


@given(st.integers(0, 5).flatmap(lambda d: st.sampled_from(partitions_of(d))),
       st.integers(0, 3), st.sampled_from([HORIZONTAL, VERTICAL]))
def test_add_strips_against_brute_force(mu, r, kind):
    assert set(add_strips(mu, r, kind)) == _brute_strips(mu, r, kind)
    for lam in add_strips(mu, r, kind):
        assert strip_test(lam, mu, kind) == r
        assert mu in sub_strips(lam, r, kind)


@given(partitions)
def test_strips_swap_under_conjugation(lam):
    for r in range(3):
        h = {conjugate(m) for m in sub_strips(lam, r, HORIZONTAL)}
        v = set(sub_strips(conjugate(lam), r, VERTICAL))
        assert h == v


@given(partitions, partitions)
def test_dominance_reverses_under_conjugation(a, b):
    if sum(a) == sum(b):
        assert dominance_leq(a, b) == dominance_leq(conjugate(b), conjugate(a))


def test_partitions_up_to_respects_length():
    assert all(len(p) <= 2 for p in partitions_up_to(6, max_len=2))
    assert len(partitions_up_to(4)) == sum(PARTITION_COUNTS[:5])
