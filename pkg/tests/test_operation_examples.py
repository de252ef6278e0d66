"""Worked examples for each public operation, one small case per line."""

from fractions import Fraction

import pytest

from thetaforge.algebra import QT, FactoredQT, MultiPoly, PolyRing, poly_arith, ratfunc_eq, specialize, truncate_degree
from thetaforge.errors import ArithmeticOverflowError, DegenerateFactorError, OutOfDiagramError, PoleError, StripError
from thetaforge.partitions import (HORIZONTAL, VERTICAL, Partition, arm_leg_hook, conjugate, dominance_leq,
                                   odd_columns, partitions_of, strip_test)
from thetaforge.thetanum import ThetaContext, qpoch, theta, theta_poch

P = Partition
q, t = QT.var("q"), QT.var("t")
qp, tp = QT.gens()


class TestPolynomials:
    def test_add_inverse(self):
        assert poly_arith("add", qp, -qp).is_zero()

    def test_difference_of_squares(self):
        assert poly_arith("mul", 1 - qp, 1 + qp) == 1 - qp * qp

    def test_multiplicative_identity(self):
        f = 3 * qp * tp * tp + 5
        assert poly_arith("mul", f, QT.one().num) == f

    def test_exponent_overflow(self):
        with pytest.raises(ArithmeticOverflowError):
            MultiPoly(QT, {(2**31, 0): 1})

    def test_truncation(self):
        R = PolyRing.of("q", "x1", "x2")
        x1 = MultiPoly(R, {(0, 1, 0): 1})
        x2 = MultiPoly(R, {(0, 0, 1): 1})
        one = MultiPoly(R, {(0, 0, 0): 1})
        assert truncate_degree(one + x1 + x1 * x1, ["x1"], 1) == one + x1
        f = 3 * x1 * x2
        assert truncate_degree(f, [], 0) == f
        qq = MultiPoly(R, {(1, 0, 0): 1})
        assert truncate_degree(qq * x1 * x2, ["x1", "x2"], 1).is_zero()


class TestRationalFunctions:
    def test_equality(self):
        assert ratfunc_eq((q * q - 1) / (q - 1), q + 1)
        assert not ratfunc_eq(q / t, t / q)
        f = (1 - q * t) / (1 - q)
        assert ratfunc_eq(f * ((1 + t) / (1 + t)), f)

    def test_specialisation(self):
        assert specialize((1 - q * t) / (1 - q), {"q": t}) == 1 + t
        assert specialize((1 + t) / (1 - q), {"q": 0}) == 1 + t
        with pytest.raises(PoleError):
            specialize(1 / (1 - q), {"q": 1})

    def test_factored(self):
        assert FactoredQT(((1, 0, 1, 1),)).to_ratfunc() == 1 - t
        assert FactoredQT(((-1, 1, 1, 2),)).to_ratfunc() == (1 + q * t) ** 2
        assert FactoredQT(((1, 1, 0, -1),)).to_ratfunc() == 1 / (1 - q)
        with pytest.raises(DegenerateFactorError):
            FactoredQT(((1, 0, 0, 1),))


class TestPartitions:
    def test_conjugate(self):
        assert conjugate(P([3, 1])) == P([2, 1, 1])
        assert conjugate(P([])) == P([])
        lam = P([5, 4, 2, 2, 1])
        assert conjugate(lam) == P([5, 4, 2, 2, 1]) and conjugate(conjugate(lam)) == lam

    def test_arm_leg_hook(self):
        assert arm_leg_hook(P([1]), (1, 1)) == (0, 0, 1)
        assert arm_leg_hook(P([3, 1]), (1, 1)) == (2, 1, 4)
        assert arm_leg_hook(P([3, 1]), (1, 3)) == (0, 0, 1)
        with pytest.raises(OutOfDiagramError):
            arm_leg_hook(P([3, 1]), (2, 2))

    def test_strip_test(self):
        assert strip_test(P([5, 4, 2, 2, 1]), P([4, 3, 1, 1, 1]), VERTICAL) == 4
        assert strip_test(P([2, 1]), P([2, 1]), HORIZONTAL) == 0
        assert strip_test(P([2, 1]), P([2, 1]), VERTICAL) == 0
        assert strip_test(P([2]), P([]), VERTICAL) is None

    def test_enumeration(self):
        assert set(partitions_of(4)) == {P([4]), P([3, 1]), P([2, 2]), P([2, 1, 1]), P([1, 1, 1, 1])}
        # conjugate (4,3,3,1,1,1) has five odd parts
        assert odd_columns(P([6, 3, 3, 1])) == 5
        assert dominance_leq(P([2, 2]), P([3, 1]))
        assert not dominance_leq(P([3, 1]), P([2, 2]))


class TestTheta:
    def test_theta(self):
        assert theta(2, ThetaContext(0)) == -1
        assert theta(1, ThetaContext(0.4 + 0.1j)) == 0

    def test_theta_inversion_100_points(self):
        import cmath
        ctx = ThetaContext(0.3 - 0.2j)
        for k in range(100):
            x = cmath.rect(0.6 + k / 100, 0.37 * k)
            assert abs(theta(x, ctx) + x * theta(1 / x, ctx)) < 1e-12

    def test_theta_poch(self):
        ctx = ThetaContext(0.25j)
        a, qq = 0.7 + 0.4j, 0.9 - 0.3j
        assert theta_poch(a, qq, 0, ctx) == 1
        assert theta_poch(a, qq, 1, ctx) == theta(a, ctx)
        lhs = theta_poch(a, qq, 2, ctx) * theta_poch(a * qq**2, qq, 3, ctx)
        assert abs(lhs - theta_poch(a, qq, 5, ctx)) < 1e-12

    def test_qpoch(self):
        a, qq = 0.3 + 0.1j, 0.6
        assert abs(qpoch(a, qq, -1) - 1 / (1 - a / qq)) < 1e-15
        assert abs(qpoch(qq, qq, 3) - (1 - qq) * (1 - qq**2) * (1 - qq**3)) < 1e-15
        assert all(qpoch(1, qq, k) == 0 for k in range(1, 5))


class TestSymmetricFunctions:
    def test_monomial_products(self):
        from thetaforge.symfunc import SymSeries, msym_product
        m1 = SymSeries.monomial([1], 2, 2)
        assert msym_product(m1, m1).coeffs == {P([2]): QT.one(), P([1, 1]): QT.one() * 2}
        assert msym_product(m1, SymSeries.one(2, 2)).coeffs == m1.coeffs
        m1_one = SymSeries.monomial([1], 1, 2)
        assert msym_product(m1_one, m1_one).coeffs == {P([2]): QT.one()}

    def test_scalar_product(self):
        from thetaforge.symfunc import SymSeries, scalar_product
        p1 = SymSeries(2, 2, {P([1]): 1})
        p2 = SymSeries(2, 2, {P([2]): 1})
        p11 = SymSeries(2, 2, {P([2]): 1, P([1, 1]): 2})
        assert scalar_product(p1, p1) == (1 - q) / (1 - t)
        assert scalar_product(p2, p11).is_zero()
        assert scalar_product(p11, p11) == 2 * ((1 - q) / (1 - t)) ** 2


class TestMacdonald:
    def test_P(self):
        from thetaforge.macdonald import macdonald_P
        assert macdonald_P([1], 3).coeffs == {P([1]): QT.one()}
        assert macdonald_P([1, 1], 3).coeffs == {P([1, 1]): QT.one()}

    def test_Q(self):
        from thetaforge.macdonald import macdonald_P, macdonald_Q
        from thetaforge.symfunc import scalar_product
        assert macdonald_Q([1], 2).coeffs == {P([1]): (1 - t) / (1 - q)}
        assert macdonald_Q([], 2).coeffs == {P([]): QT.one()}
        assert scalar_product(macdonald_P([2], 2), macdonald_Q([2], 2)) == QT.one()

    def test_b(self):
        from thetaforge.macdonald import b_minus_forms, b_pm
        assert b_pm([1], -1) == (1 + t) / (1 - q)
        assert b_pm([2], -1) == (1 + t) * (1 + q * t) / ((1 - q) * (1 - q * q))
        assert b_pm([], 1) == QT.one()
        assert b_minus_forms([1], 1)[0] == (1 + t) / (1 - q)
        assert b_minus_forms([], 3) == (QT.one(), QT.one())
        assert b_minus_forms([2, 1], 2) == b_minus_forms([2, 1], 3)

    def test_g(self):
        from thetaforge.macdonald import g_r, macdonald_Q
        assert g_r(0, 2).coeffs == {P([]): QT.one()}
        assert g_r(1, 2).coeffs == macdonald_Q([1], 2).coeffs
        # coefficient of x1 x2 y^2 in prod_i (t x_i y; q)_inf / (x_i y; q)_inf
        assert g_r(2, 2).coeffs[P([1, 1])] == ((1 - t) / (1 - q)) ** 2

    def test_pieri_coefficients(self):
        from thetaforge.macdonald import pieri_phi_psi, pieri_psi_prime
        assert pieri_psi_prime([2], [1]) == QT.one()
        assert pieri_psi_prime([1, 1], [1]) == (1 - q) * (1 + t) / (1 - q * t)
        assert pieri_psi_prime([2, 1], [2, 1]) == QT.one()
        assert pieri_phi_psi([1], [], "phi") == (1 - t) / (1 - q)
        assert pieri_phi_psi([1], [], "psi") == QT.one()
        assert pieri_phi_psi([3, 1], [3, 1], "phi") == QT.one()
        with pytest.raises(StripError):
            pieri_psi_prime([2], [])

    def test_extraction(self):
        from thetaforge.macdonald import pieri_extract
        assert pieri_extract([], 1, 2, "phi") == {P([1]): (1 - t) / (1 - q)}
        assert pieri_extract([1], 1, 2, "psi_prime") == {P([2]): QT.one(),
                                                          P([1, 1]): (1 - q) * (1 + t) / (1 - q * t)}
        for which in ("phi", "psi", "psi_prime"):
            assert pieri_extract([], 0, 2, which) == {P([]): QT.one()}

    def test_lr(self):
        from thetaforge.macdonald import qt_LR
        assert qt_LR([1], [1]) == {P([2]): QT.one(), P([1, 1]): (1 - q) * (1 + t) / (1 - q * t)}
        assert qt_LR([], [2, 1]) == {P([2, 1]): QT.one()}
        assert qt_LR([2], [1, 1], 4) == qt_LR([1, 1], [2], 4)

    def test_lr_symmetries(self):
        from thetaforge.macdonald import pieri_phi_psi, pppp_sides, verify_lr_symmetries
        assert verify_lr_symmetries(1, pppp_box=(1, 1), pppp_rs=1)["pass"]
        lhs, rhs = pppp_sides([1], 0, 2, [3])
        assert lhs == rhs == pieri_phi_psi([3], [1], "phi")


class TestThetaIdentities:
    def test_trivial_and_low_rank(self):
        from thetaforge.thetaids import eval_thmrn_side
        ctx = ThetaContext(0.2)
        assert eval_thmrn_side("L", [], 0.3, 0.4, 0.5, 0.6, ctx) == 1
        assert eval_thmrn_side("R", [], 0.3, 0.4, 0.5, 0.6, ctx) == 1

    def test_degenerate_slices(self):
        from thetaforge.thetaids import REGISTRY, eval_identity
        ctx = ThetaContext(0.3 + 0.1j)
        lhs, _ = eval_identity("ww", {"x": [0.8 + 0.2j], "y": []}, ctx)
        assert abs(lhs) < 1e-15
        x1, x2 = 0.9 + 0.3j, 1.2 - 0.4j
        lhs, _ = eval_identity("gu", {"x": [x1, x2], "y": []}, ctx)
        assert abs(lhs) < 1e-12
        z = 0.7 + 0.5j
        lhs, rhs = eval_identity("rr", {"x": 1.1, "y": 0.8j, "z": z, "w": z}, ctx)
        assert abs(lhs) < 1e-15 and abs(rhs) < 1e-15
        assert "rr" in REGISTRY

    @pytest.mark.parametrize("id_,trials,n,tol", [("rr", 100, None, 1e-9), ("thmrn", 50, 3, 1e-8),
                                                  ("rosengren", 50, 2, 1e-8)])
    def test_numeric_runs(self, id_, trials, n, tol):
        from thetaforge.thetaids import verify_numeric
        assert verify_numeric(id_, trials, 0, tol, n=n)["pass"]

    def test_final(self):
        from thetaforge.thetaids import final_sides, verify_final_exact
        assert final_sides([3, 1], 3, 0) == (QT.one(), QT.one())
        assert verify_final_exact([1], 1, 1)
        assert verify_final_exact([2, 1], 2, 2)


class TestSeries:
    def ops(self):
        from thetaforge.ehs import Ops
        return Ops.elliptic(0.7 + 0.3j, ThetaContext(0.2 + 0.1j))

    def test_trivial_lengths(self):
        from thetaforge.ehs import (Ops, elliptic_ext_n1_sides, eval_Vm, new_sides, thmvst_sides,
                                    verify_cordmsum, verify_cornew, wn_sides)
        ops = self.ops()
        args = (0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j)
        assert eval_Vm(*args, [0.7, 1.3], (0, 0), ops) == 1
        lhs, rhs = thmvst_sides(*args, [0.7, 1.3], (0, 0), ops)
        assert lhs == rhs == 1
        for sides in (new_sides(*args, 0, ops), wn_sides(*args, [0.6], [1.4], 0, ops),
                      elliptic_ext_n1_sides(*args, 0, ops)):
            assert all(abs(v - 1) < 1e-15 for v in sides)
        F = Fraction
        assert verify_cornew(F(2, 7), F(3, 5), F(5, 4), F(1, 3), [F(1, 2), F(3, 4)], (0, 0))
        assert verify_cordmsum(F(2, 7), F(3, 11), F(3, 5), F(5, 4), [F(1, 2), F(3, 4)], (0, 0), F(1, 3))
        assert Ops.exact_mode(F(1, 3)).one == 1

    def test_one_variable_reductions(self):
        from thetaforge.ehs import eval_Vm, new_sum, wn_sum
        from thetaforge.thetanum import residual
        ops = self.ops()
        a, b, c, d, t1 = 0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j, 0.75 - 0.4j
        for n in (1, 2, 3):
            target = new_sum(a, b, c, d, n, ops)
            assert residual(eval_Vm(a / t1, b, c, d, [t1], (n,), ops), target) < 1e-12
            assert residual(wn_sum(a / t1, b, c, d, [1 / t1], [t1], n, ops), target) < 1e-12

    def test_vanishing_first_term(self):
        from thetaforge.ehs import Ops, eval_Vm, vm_term
        F = Fraction
        ops = Ops.exact_mode(F(1, 3))
        a, b, d, t1, t2 = F(2, 7), F(3, 5), F(5, 4), F(1, 2), F(3, 4)
        c = a * b * t1  # (a b t_1 / c)_1 = (1)_1 = 0 kills k = (1, 0)
        assert vm_term(a, b, c, d, [t1, t2], (1, 1), (1, 0), ops) == 0
        full = eval_Vm(a, b, c, d, [t1, t2], (1, 1), ops)
        rest = sum(vm_term(a, b, c, d, [t1, t2], (1, 1), k, ops) for k in [(0, 0), (0, 1), (1, 1)])
        assert full == rest

    def test_exact_and_numeric_runs(self):
        from thetaforge.ehs import Ops, verify_new, verify_thmVst
        F = Fraction
        assert verify_thmVst(F(2, 7), F(3, 5), F(5, 4), F(7, 3), [F(1, 2)], (2,), Ops.exact_mode(F(1, 3)))
        ctx = ThetaContext(0.3)
        ops = Ops.elliptic(0.7 + 0.3j, ctx)
        assert verify_thmVst(0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j, [0.7j, 1.3], (2, 1), ops) < 1e-7
        assert verify_new(0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j, 4, ops) < 1e-8

    def test_matrix_entries(self):
        from thetaforge.ehs import matrix_pair
        F = Fraction
        args = (F(2, 7), F(3, 11), F(3, 5), F(5, 4), [F(1, 2), F(3, 4)], F(1, 3))
        assert matrix_pair("f_k", None, (0, 0), *args) == 1
        for k in [(0, 0), (1, 0), (0, 1), (1, 1)]:
            assert matrix_pair("M", k, k, *args) != 0
        assert matrix_pair("M", (1, 0), (0, 1), *args) == 0

    def test_double_sum_small(self):
        from thetaforge.ehs import verify_cordmsum
        F = Fraction
        assert verify_cordmsum(F(2, 7), F(3, 11), F(3, 5), F(5, 4), [F(1, 2)], (2,), F(1, 3))
        assert verify_cordmsum(F(2, 7), F(3, 11), F(3, 5), F(5, 4), [F(1, 2), F(3, 4)], (1, 1), F(1, 3))

    def test_elliptic_extension(self):
        from thetaforge.ehs import verify_elliptic_ext_N1
        ops = self.ops()
        args = (0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j)
        assert verify_elliptic_ext_N1(*args, 1, ops) < 1e-9
        assert verify_elliptic_ext_N1(*args, 4, ops) < 1e-8

    def test_principal_specialisation(self):
        from thetaforge.ehs import principal_specialize_check
        ops = self.ops()
        args = (0.8 + 0.2j, 1.1 - 0.3j, 0.9 + 0.5j, 1.2 + 0.1j)
        for m, tv in [((1,), [0.7j]), ((1, 1), [0.7j, 1.3]), ((2, 1), [0.7j, 1.3])]:
            assert principal_specialize_check(*args, tv, m, ops) < 1e-7


class TestKawanaka:
    def test_low_degree(self):
        from thetaforge.kawanaka import kawanaka_lhs, kawanaka_rhs, verify_kawanaka
        assert kawanaka_lhs(3, 0).coeffs == {P([]): QT.one()}
        assert kawanaka_rhs(3, 0).coeffs == {P([]): QT.one()}
        assert kawanaka_lhs(2, 1).coeffs == {P([]): QT.one(), P([1]): (1 + t) / (1 - q)}
        assert verify_kawanaka(2, 4)

    def test_pieri_forms(self):
        from thetaforge.kawanaka import pieri_sides, verify_proppieri
        assert pieri_sides([], 0) == (QT.one(), QT.one())
        for form in ("horizontal", "vertical"):
            assert verify_proppieri([], 1, form)
            assert verify_proppieri([2, 1], 2, form)

    def test_recursion_trivial(self):
        from thetaforge.kawanaka import verify_recursion
        assert verify_recursion(2, 0)

    def test_graded_pair(self):
        from thetaforge.kawanaka import verify_MD
        assert verify_MD("columns-even-legs", 1, 4)
        assert verify_MD("rows-odd-arms", 1, 4)

    def test_specialisations(self):
        from thetaforge.algebra import qt_poch
        from thetaforge.kawanaka import verify_specialized
        assert verify_specialized("schur", 1, 3)
        assert verify_specialized("hall-littlewood", 2, 3)
        # the multiplicity product (-t; t^2)_2 on its own
        assert qt_poch(-1, 0, 1, 2, (0, 2)).to_ratfunc() == (1 + t) * (1 + t**3)
