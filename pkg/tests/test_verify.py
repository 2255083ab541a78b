"""
Tests for the verification engine.

Covers:
- classify: ExactZero / ConstantOnly / EdgeLocalized / Fail, exact vs float tolerance
- check_fold_identity with and without allow_constant
- Yangian readings of J(h): only -E1^z satisfies the relations (xxx), only +E^z_{k,1} (long range)
- Twisted-plus relations and RelationParams, including the magnetic-boundary generators X^+-
- Twisted-minus relations: G satisfies them, plain E2 breaks the cubic one
- Diagonal relations: Y^z passes, -Y^z fails
- symmetrizer
- search_folding_constants on the magnetic XXX boundary
- CheckResult.ok semantics and run_checks ordering
"""

import os
import sys
from fractions import Fraction

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from spinfold.errors import ParameterError
from spinfold.model_double_row import build_ab, build_y
from spinfold.model_inozemtsev import InoParams, build_e1_kappa
from spinfold.model_xxx import XxxParams, build_e0, build_e1, build_e2, build_g, build_x
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, MINUS, PLUS, Z, ChainSpec, identity, power, scale, site_op, zero,
)
from spinfold.scalars import EXACT, FLOAT
from spinfold.verify import (
    CONSTANT_ONLY, EDGE_LOCALIZED, EXACT_ZERO, EXPECT_FAIL, EXPECT_PASS, FAIL, Check,
    CheckResult, RelationParams, check_diagonal, check_fold_identity, check_relations_readings, check_symmetry,
    check_twisted_minus, check_twisted_plus, classify, run_checks, search_folding_constants, symmetrizer,
)


# ═══════════════════════════════════════════════════════════════════
# CLASSIFY
# ═══════════════════════════════════════════════════════════════════

class TestClassify:

    def setup_method(self):
        self.chain = ChainSpec(4, HALF_LINE)

    def test_zero(self):
        report = classify(zero(self.chain), edge_window=1)
        assert report.status == EXACT_ZERO
        assert report.passed

    def test_constant_only(self):
        report = classify(identity(self.chain, EXACT, Fraction(-3, 2)), edge_window=1)
        assert report.status == CONSTANT_ONLY
        assert report.constant == Fraction(-3, 2)

    def test_edge_localized(self):
        residual = site_op(self.chain, EXACT, Z, -3) + identity(self.chain)
        report = classify(residual, edge_window=1)
        assert report.status == EDGE_LOCALIZED
        assert report.max_edge_coeff == 1

    def test_interior_fails_with_witness(self):
        residual = site_op(self.chain, EXACT, PLUS, 0, coeff=2) + site_op(self.chain, EXACT, Z, -1)
        report = classify(residual, edge_window=1)
        assert report.status == FAIL
        assert not report.passed
        assert 's+_{0}' in report.witness

    def test_exact_ignores_tolerance(self):
        residual = site_op(self.chain, EXACT, Z, 0, coeff=Fraction(1, 10 ** 15))
        assert classify(residual, edge_window=1, tol=1e-3).status == FAIL

    def test_float_tolerance(self):
        residual = site_op(self.chain, FLOAT, Z, 0, coeff=1e-12)
        assert classify(residual, edge_window=1, tol=1e-9).status == EXACT_ZERO
        assert classify(residual, edge_window=1, tol=1e-14).status == FAIL

    def test_symmetry(self):
        h = site_op(self.chain, EXACT, Z, 0)
        assert check_symmetry(h, site_op(self.chain, EXACT, Z, -1), edge_window=1).status == EXACT_ZERO
        assert check_symmetry(h, site_op(self.chain, EXACT, PLUS, 0), edge_window=1).status == FAIL


# ═══════════════════════════════════════════════════════════════════
# FOLD IDENTITIES
# ═══════════════════════════════════════════════════════════════════

class TestFoldIdentity:

    def setup_method(self):
        self.chain = ChainSpec(2, HALF_LINE)
        self.a = site_op(self.chain, EXACT, Z, 0)

    def test_equal(self):
        report = check_fold_identity(self.a, self.a)
        assert report.status == EXACT_ZERO
        assert report.max_residual == 0.0

    def test_constant_needs_permission(self):
        shifted = self.a + identity(self.chain, EXACT, 2)
        assert check_fold_identity(shifted, self.a).status == FAIL
        report = check_fold_identity(shifted, self.a, allow_constant=True)
        assert report.status == CONSTANT_ONLY
        assert report.constant == 2

    def test_mismatch_reports_witness(self):
        report = check_fold_identity(self.a, scale(self.a, 2), allow_constant=True)
        assert report.status == FAIL
        assert 'sz_{0}' in report.witness


# ═══════════════════════════════════════════════════════════════════
# ALGEBRA RELATIONS
# ═══════════════════════════════════════════════════════════════════

class TestYangianReadings:

    def setup_method(self):
        chain = ChainSpec(2, FULL_LINE)
        p = XxxParams(1)
        self.e0 = {a: build_e0(chain, a) for a in (PLUS, MINUS, Z)}
        self.e1 = {a: build_e1(chain, p, a) for a in (PLUS, MINUS, Z)}

    def test_only_minus_reading_holds(self):
        readings = check_relations_readings(self.e0, self.e1, 1, edge_window=0)
        assert readings['minus'].passed
        assert not readings['literal'].passed
        assert not readings['plus'].passed

    def test_failing_lists_relations(self):
        readings = check_relations_readings(self.e0, self.e1, 1, edge_window=0)
        assert readings['minus'].failing() == []
        assert readings['literal'].failing()
        assert readings['literal'].witness is not None

    def test_long_range_takes_plus_reading(self):
        chain = ChainSpec(2, FULL_LINE)
        p = InoParams(1.0, 1.0)
        e0 = {a: build_e0(chain, a, FLOAT) for a in (PLUS, MINUS, Z)}
        e1 = {a: build_e1_kappa(chain, p, a) for a in (PLUS, MINUS, Z)}
        readings = check_relations_readings(e0, e1, 1.0, edge_window=0, tol=1e-10)
        assert readings['plus'].passed
        assert not readings['minus'].passed
        assert not readings['literal'].passed


class TestTwistedPlus:

    def setup_method(self):
        self.chain = ChainSpec(1, HALF_LINE)

    def op(self, gen, coeff=1):
        return site_op(self.chain, EXACT, gen, 0, coeff=coeff)

    def test_single_site_representation(self):
        report = check_twisted_plus(self.op(Z), self.op(PLUS), self.op(MINUS), 1, Fraction(-1, 3), edge_window=0)
        assert report.status == EXACT_ZERO

    def test_wrong_grading(self):
        report = check_twisted_plus(self.op(Z, 2), self.op(PLUS), self.op(MINUS), 1, 0, edge_window=0)
        assert report.status == FAIL
        assert '[k,B+]=2B+' in report.failing()

    def test_magnetic_boundary_generators(self):
        half = ChainSpec(3, HALF_LINE)
        p = XxxParams(1, Fraction(3, 2))
        k, xp, xm = build_e0(half, Z), build_x(half, p, PLUS), build_x(half, p, MINUS)
        assert check_twisted_plus(k, xp, xm, 1, Fraction(-1, 3), edge_window=0).status == EXACT_ZERO
        report = check_twisted_plus(k, xp, xm, 1, Fraction(-2, 3), edge_window=0)
        assert report.status == FAIL
        assert {'quartic+', 'quartic-'} <= set(report.failing())

    def test_relation_params_from_mu(self):
        r = RelationParams.from_mu(Fraction(1), Fraction(3, 2))
        assert r.c == Fraction(-1, 3)
        assert r.alpha_plus == Fraction(1, 6)
        assert r.alpha_minus == Fraction(5, 6)

    def test_relation_params_validated(self):
        with pytest.raises(ParameterError):
            RelationParams(1, 0, 1, 0)
        with pytest.raises(ParameterError):
            RelationParams.from_mu(1, 0)

    def test_symmetrizer_of_equal_ops(self):
        a = self.op(Z) + self.op(PLUS)
        assert symmetrizer(a, a, a) == power(a, 3)


class TestTwistedMinus:

    def setup_method(self):
        self.half = ChainSpec(3, HALF_LINE)
        self.p = XxxParams(1)
        self.x = {a: build_e0(self.half, a) for a in (PLUS, MINUS, Z)}

    def test_open_boundary_generators(self):
        g = {a: build_g(self.half, self.p, a) for a in (PLUS, MINUS, Z)}
        assert check_twisted_minus(self.x, g, 1, edge_window=0).status == EXACT_ZERO

    def test_plain_level_two_breaks_cubic_relation(self):
        e2 = {a: build_e2(self.half, self.p, a) for a in (PLUS, MINUS, Z)}
        report = check_twisted_minus(self.x, e2, 1, edge_window=0)
        assert report.status == FAIL
        assert report.failing() == ['cubic']


class TestDiagonal:

    def setup_method(self):
        self.half = ChainSpec(2, HALF_LINE, rows=2)
        self.p = XxxParams(1)
        self.a0 = {a: build_ab(self.half, self.p, a, 0, 'A') for a in (PLUS, MINUS, Z)}
        self.y = {a: build_y(self.half, self.p, a) for a in (PLUS, MINUS, Z)}

    def test_y_satisfies_relations(self):
        assert check_diagonal(self.a0, self.y, 1, edge_window=0).status == EXACT_ZERO

    def test_flipped_yz_fails(self):
        flipped = {**self.y, Z: scale(self.y[Z], -1)}
        report = check_diagonal(self.a0, flipped, 1, edge_window=0)
        assert report.status == FAIL
        assert 'cubic' in report.failing()

    def test_long_range_y_satisfies_relations(self):
        p = InoParams(1.0, 1.0)
        a0 = {a: build_ab(self.half, p, a, 0, 'A') for a in (PLUS, MINUS, Z)}
        y = {a: build_y(self.half, p, a) for a in (PLUS, MINUS, Z)}
        assert check_diagonal(a0, y, 1.0, edge_window=0, tol=1e-10).passed


# ═══════════════════════════════════════════════════════════════════
# FOLDING-CONSTANT SEARCH
# ═══════════════════════════════════════════════════════════════════

class TestSearch:

    def test_xxx_recovers_ratio(self):
        chain = ChainSpec(3, FULL_LINE)
        table = search_folding_constants('xxx_magnetic', chain, XxxParams(1, 1, FLOAT), ['z+'])
        assert list(table.columns) == ['z+', 'residual']
        assert abs(float(table.iloc[0]['z+']) - 1.0) <= 1e-2 + 1e-9
        assert table['residual'].is_monotonic_increasing

    def test_needs_free_entries(self):
        with pytest.raises(ParameterError):
            search_folding_constants('xxx_magnetic', ChainSpec(3, FULL_LINE), XxxParams(1, 1, FLOAT), [])

    def test_unknown_model(self):
        with pytest.raises(ParameterError):
            search_folding_constants('periodic', ChainSpec(3, FULL_LINE), XxxParams(1, 1, FLOAT), ['z+'])


# ═══════════════════════════════════════════════════════════════════
# SUITE RUNNER
# ═══════════════════════════════════════════════════════════════════

class TestRunner:

    def test_ok_semantics(self):
        assert CheckResult('a', EXACT_ZERO, EXPECT_PASS).ok
        assert not CheckResult('a', FAIL, EXPECT_PASS).ok
        assert CheckResult('a', FAIL, EXPECT_FAIL).ok
        assert not CheckResult('a', EDGE_LOCALIZED, EXPECT_FAIL).ok
        assert not CheckResult('a', EXACT_ZERO, EXPECT_PASS, error='boom').ok
        assert not CheckResult('a', FAIL, EXPECT_FAIL, error='boom').ok

    def test_exact_zero_serialises_as_text(self):
        assert CheckResult('a', EXACT_ZERO).to_dict()['max_interior'] == '0'

    def test_run_checks_sorted_and_errors_captured(self):
        chain = ChainSpec(2, HALF_LINE)
        a = site_op(chain, EXACT, Z, 0)

        def broken():
            raise ParameterError("bad input")

        checks = [
            Check('b/identity', lambda: check_fold_identity(a, a)),
            Check('a/broken', broken),
            Check('c/mismatch', lambda: check_fold_identity(a, scale(a, 2)), expected=EXPECT_FAIL),
        ]
        results = run_checks(checks, threads=2)
        assert [r.check for r in results] == ['a/broken', 'b/identity', 'c/mismatch']
        assert results[0].error == 'bad input' and not results[0].ok
        assert results[1].ok and results[2].ok
