import random
from fractions import Fraction

import pytest

from thetaforge.cli.rng import SplitMix64
from thetaforge.cli.sampler import sample_complex, sample_nome
from thetaforge.ehs import (
    Ops,
    cordmsum_lhs,
    cordmsum_rhs,
    cornew_sides,
    eval_Vm,
    eval_Vm_succinct,
    jackson_6w5,
    matrix_inverse_defect,
    mf_sum,
    pppp_correspondence,
    principal_specialize_check,
    thmvst_dual,
    thmvst_sides,
    verify_cordmsum,
    verify_elliptic_ext_N1,
    verify_new,
    verify_thmVst,
    verify_Wn,
)
from thetaforge.errors import PoleError, PreconditionError, VandermondeError
from thetaforge.thetanum import ThetaContext, residual


def rat(rng):
    while True:
        x = Fraction(rng.randint(2, 23), rng.randint(2, 23))
        if x != 1:
            return x * rng.choice([1, -1])


def exact_params(rng, N):
    return [rat(rng) for _ in range(5)], [rat(rng) for _ in range(N)]


def elliptic_params(seed, N):
    rng = SplitMix64(seed)
    a, b, c, d, q = (sample_complex(rng) for _ in range(5))
    t = [sample_complex(rng) for _ in range(N)]
    return (a, b, c, d, q, t), ThetaContext(sample_nome(rng))


def _first_regular(check, tries=40):
    # redraw until the point avoids every pole; returns the check result
    for k in range(tries):
        try:
            return check(k)
        except (PoleError, ZeroDivisionError):
            continue
    pytest.fail("no regular point found")


def test_pd_negative_length():
    ops = Ops.exact_mode(Fraction(1, 3))
    a = Fraction(2, 5)
    # (a)_{-1} = 1 / (1 - a/q)
    assert ops.pd(a, -1) == 1 / (1 - a * 3)
    assert ops.pf(a, -1) == 1 / (1 - a * 3)


def test_guard_raises_near_pole():
    ops = Ops.elliptic(0.5, ThetaContext(0.1))
    with pytest.raises(PoleError):
        ops.thd(1 + 1e-9)


@pytest.mark.parametrize("m", [(1,), (3,), (1, 2), (2, 2)])
def test_transformation_elliptic(m):
    def check(k):
        (a, b, c, d, q, t), ctx = elliptic_params(100 * k + sum(m), len(m))
        return verify_thmVst(a, b, c, d, t, m, Ops.elliptic(q, ctx))
    assert _first_regular(check) < 1e-7


@pytest.mark.parametrize("m", [(2,), (1, 1), (3, 2)])
def test_transformation_exact(m):
    rng = random.Random(hash(m))

    def check(k):
        (a, b, c, d, q), t = exact_params(rng, len(m))
        return verify_thmVst(a, b, c, d, t, m, Ops.exact_mode(q))
    assert _first_regular(check) is True


def test_transformation_fails_when_perturbed():
    rng = random.Random(4)
    (a, b, c, d, q), t = exact_params(rng, 2)
    ops = Ops.exact_mode(q)
    lhs, rhs = thmvst_sides(a, b, c, d, t, (1, 1), ops)
    lhs2, _ = thmvst_sides(a, b, c, d * q, t, (1, 1), ops)
    assert lhs == rhs and lhs2 != rhs and lhs != 1


def test_succinct_form_agrees():
    (a, b, c, d, q, t), ctx = elliptic_params(9, 2)
    ops = Ops.elliptic(q, ctx)
    assert residual(eval_Vm(a, b, c, d, t, (2, 1), ops),
                    eval_Vm_succinct(a, b, c, d, t, (2, 1), ops)) < 1e-9


def test_vm_rejects_mismatched_lengths():
    with pytest.raises(PreconditionError):
        eval_Vm(0.3, 0.4, 0.5, 0.6, [0.7], (1, 1), Ops.exact_mode(Fraction(1, 2)))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_new_elliptic(n):
    def check(k):
        (a, b, c, d, q, _), ctx = elliptic_params(7 * k + n, 0)
        return verify_new(a, b, c, d, n, Ops.elliptic(q, ctx))
    assert _first_regular(check) < 1e-8


@pytest.mark.parametrize("n", [1, 2, 4])
def test_new_exact(n):
    rng = random.Random(n)
    assert _first_regular(lambda k: verify_new(*exact_params(rng, 0)[0][:4], n,
                                               Ops.exact_mode(rat(rng)))) is True


@pytest.mark.parametrize("n", range(0, 5))
def test_jackson_closed_form(n):
    rng = random.Random(n)

    def check(k):
        lhs, rhs = jackson_6w5(rat(rng), rat(rng), rat(rng), n, rat(rng))
        return lhs == rhs
    assert _first_regular(check)


@pytest.mark.parametrize("m", [(2,), (1, 2), (1, 1, 1)])
def test_multivariable_jackson(m):
    rng = random.Random(len(m))

    def check(k):
        (a, _, c, d, q), t = exact_params(rng, len(m))
        lhs, rhs = cornew_sides(a, c, d, t, m, q)
        return lhs == rhs
    assert _first_regular(check)


def test_multivariable_jackson_reduces_to_one_variable():
    a, c, d, q = Fraction(2, 7), Fraction(3, 5), Fraction(-5, 4), Fraction(1, 3)
    lhs, rhs = cornew_sides(a, c, d, [Fraction(1)], (3,), q)
    jl, jr = jackson_6w5(a, c, d, 3, q)
    assert lhs == jl and rhs == jr


def test_equal_t_is_vandermonde_error():
    with pytest.raises(VandermondeError):
        cornew_sides(Fraction(2, 7), Fraction(3, 5), Fraction(5, 4), [Fraction(1, 2)] * 2, (1, 1),
                     Fraction(1, 3))


@pytest.mark.parametrize("N,n", [(1, 2), (2, 2), (2, 3)])
def test_simplex_transformation(N, n):
    def check(k):
        (a, b, c, d, q, t), ctx = elliptic_params(31 * k + N + n, N)
        rng = SplitMix64(k + 1000)
        s = [sample_complex(rng) for _ in range(N)]
        return verify_Wn(a, b, c, d, s, t, n, Ops.elliptic(q, ctx))
    assert _first_regular(check) < 1e-7


@pytest.mark.parametrize("m", [(1, 0), (2, 1), (2, 2)])
def test_matrix_inverse(m):
    rng = random.Random(sum(m))
    ks = [(i, j) for i in range(m[0] + 1) for j in range(m[1] + 1)]

    def check(_):
        (a, b, c, d, q), t = exact_params(rng, 2)
        return all(matrix_inverse_defect(m, k, a, b, c, d, t, q) == 0 for k in ks)
    assert _first_regular(check)


@pytest.mark.parametrize("m", [(1, 1), (2, 1)])
def test_matrix_form_is_self_dual(m):
    # sum_k M_{mk} f_k is unchanged by (a, t) -> (cd/ab, q^-m / t)
    rng = random.Random(3)
    (a, b, c, d, q), t = exact_params(rng, 2)
    ah, s = thmvst_dual(a, b, c, d, t, m, q)
    total = mf_sum(m, a, b, c, d, t, q)
    assert total == mf_sum(m, ah, b, c, d, s, q)
    assert total != mf_sum(m, a * q, b, c, d, t, q)


@pytest.mark.parametrize("m", [(1,), (2,), (1, 1), (2, 1), (2, 2)])
def test_double_sum_corrected_reading(m):
    rng = random.Random(50 + sum(m))

    def check(_):
        (a, b, c, d, q), t = exact_params(rng, len(m))
        return verify_cordmsum(a, b, c, d, t, m, q)
    assert _first_regular(check)


def test_double_sum_printed_reading_fails_for_two_variables():
    rng = random.Random(1)
    (a, b, c, d, q), t = exact_params(rng, 2)
    lhs = cordmsum_lhs(a, b, c, d, t, (2, 1), q)
    assert lhs != cordmsum_rhs(a, b, c, d, t, (2, 1), q, "i<j<N", "|m|")
    assert lhs == cordmsum_rhs(a, b, c, d, t, (2, 1), q, "i<j<=N", "weighted")


@pytest.mark.parametrize("m", range(0, 6))
def test_one_variable_elliptic_double_sum(m):
    def check(k):
        (a, b, c, d, q, _), ctx = elliptic_params(13 * k + m, 0)
        return verify_elliptic_ext_N1(a, b, c, d, m, Ops.elliptic(q, ctx))
    assert _first_regular(check) < 1e-8


@pytest.mark.parametrize("m", [(1,), (2, 1), (1, 1, 1), (2, 2)])
def test_principal_specialisation(m):
    def check(k):
        (a, b, c, d, q, t), ctx = elliptic_params(17 * k + len(m), len(m))
        return principal_specialize_check(a, b, c, d, t, m, Ops.elliptic(q, ctx))
    assert _first_regular(check) < 1e-7


@pytest.mark.parametrize("mu,r,s,tau", [([1], 1, 1, [2, 1]), ([2, 2], 1, 1, [3, 2, 1]),
                                        ([2], 2, 1, [3, 2]), ([2], 1, 2, [3, 2]),
                                        ([1, 1], 1, 1, [2, 1, 1])])
def test_strip_exchange_matches_transformation(mu, r, s, tau):
    report = pppp_correspondence(mu, r, s, tau, Fraction(2, 7), Fraction(3, 5))
    assert report["pass"], report


def test_strip_exchange_degenerate_instance():
    with pytest.raises(PoleError):
        pppp_correspondence([2], 2, 1, [4, 1], Fraction(2, 7), Fraction(3, 5))
