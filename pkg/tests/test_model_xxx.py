"""
Tests for the XXX chain builders and their fold identities.

Covers:
- H_XXX, H^mu, H^0 construction and bulk sl2 symmetry
- split_pairs partition of i < j pairs
- Magnetic folding: fold(H_XXX) - 2 H^mu constant, fold(E1^z) closed form, fold(E1^+-) = 2 X^+-
- Open folding (all k = 1): fold(H_XXX) - 2 H^0 = -3 lam/2, fold(E1^a)
- Level-2 operators: E2 as a commutator of E1, fold(E2~^a) = 8/3 G^a, [H^0, G^a] edge-localized
- Parameter and geometry errors
"""

import os
import sys
from fractions import Fraction

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from spinfold.errors import GeometryError, ParameterError
from spinfold.folding import ALL_ONES, XXX_MAGNETIC, FoldPreset, fold, preset_constants
from spinfold.model_xxx import (
    DOUBLEPRIME, FULL, PRIME, XxxParams, build_e0, build_e1, build_e2, build_g, build_h_magnetic, build_h_open,
    build_h_xxx, build_x, fold_e1z_closed_form, fold_h_constant, split_pairs,
)
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, MINUS, PLUS, Z, ChainSpec, SiteId, commutator, identity, is_hermitian, linear_combine,
    scale, site_op,
)
from spinfold.scalars import EXACT
from spinfold.verify import EDGE_LOCALIZED, EXACT_ZERO, check_symmetry


# ═══════════════════════════════════════════════════════════════════
# HAMILTONIANS
# ═══════════════════════════════════════════════════════════════════

class TestHamiltonians:

    def setup_method(self):
        self.p = XxxParams(1, Fraction(3, 2))
        self.full = ChainSpec(3, FULL_LINE)
        self.half = self.full.half()

    def test_single_link(self):
        h = build_h_xxx(ChainSpec(1, FULL_LINE), XxxParams(2))
        assert len(h) == 3
        assert h.coefficient([(SiteId(0, 0), Z), (SiteId(0, 1), Z)]) == -1

    @pytest.mark.parametrize("a", [PLUS, MINUS, Z])
    def test_bulk_commutes_with_e0(self, a):
        assert commutator(build_h_xxx(self.full, self.p), build_e0(self.full, a)).is_zero()

    def test_magnetic_adds_boundary_field(self):
        diff = build_h_magnetic(self.half, self.p) - build_h_open(self.half, self.p)
        assert diff == site_op(self.half, EXACT, Z, 0, coeff=Fraction(3, 2))

    def test_magnetic_keeps_z_symmetry(self):
        h = build_h_magnetic(self.half, self.p)
        assert commutator(h, build_e0(self.half, Z)).is_zero()
        assert not commutator(h, build_e0(self.half, PLUS)).is_zero()

    def test_hermitian(self):
        assert is_hermitian(build_h_xxx(self.full, self.p))
        assert is_hermitian(build_h_magnetic(self.half, self.p))

    def test_too_short(self):
        with pytest.raises(GeometryError):
            build_h_xxx(ChainSpec(1, HALF_LINE), self.p)

    def test_magnetic_needs_half_line(self):
        with pytest.raises(GeometryError):
            build_h_magnetic(self.full, self.p)

    def test_zero_lambda_rejected(self):
        with pytest.raises(ParameterError):
            XxxParams(0)


# ═══════════════════════════════════════════════════════════════════
# LEVEL-1 OPERATORS
# ═══════════════════════════════════════════════════════════════════

class TestLevelOne:

    def setup_method(self):
        self.p = XxxParams(1)
        self.full = ChainSpec(2, FULL_LINE)

    def test_split_pairs_partition(self):
        parts = split_pairs(self.full)
        assert parts['left'] == [(-1, 0)]
        assert parts['right'] == [(1, 2)]
        assert sorted(parts['mirror']) == [(-1, 2), (0, 1)]
        assert sorted(parts['cross']) == [(-1, 1), (0, 2)]

    @pytest.mark.parametrize("a", [PLUS, MINUS, Z])
    def test_full_is_prime_plus_doubleprime(self, a):
        full = build_e1(self.full, self.p, a, FULL)
        assert full == build_e1(self.full, self.p, a, PRIME) + build_e1(self.full, self.p, a, DOUBLEPRIME)

    def test_e1z_prime_terms(self):
        e1 = build_e1(self.full, self.p, Z, PRIME)
        assert e1.coefficient([(SiteId(0, -1), PLUS), (SiteId(0, 2), MINUS)]) == 1
        assert len(e1) == 6

    def test_two_rows_need_row(self):
        with pytest.raises(GeometryError):
            build_e1(ChainSpec(1, FULL_LINE, rows=2), self.p, Z)

    def test_unknown_variant(self):
        with pytest.raises(ParameterError):
            build_e1(self.full, self.p, Z, 'triple')


# ═══════════════════════════════════════════════════════════════════
# MAGNETIC BOUNDARY FOLDING
# ═══════════════════════════════════════════════════════════════════

class TestMagneticFolding:

    def setup_method(self):
        self.p = XxxParams(1, Fraction(3, 2))
        self.full = ChainSpec(3, FULL_LINE)
        self.half = self.full.half()
        self.k = preset_constants(FoldPreset(XXX_MAGNETIC, lam=self.p.lam, mu=self.p.mu))

    def test_fold_hamiltonian_constant(self):
        diff = fold(build_h_xxx(self.full, self.p), self.k) - scale(build_h_magnetic(self.half, self.p), 2)
        assert fold_h_constant(self.p, self.k) == Fraction(-1, 2)
        assert diff == identity(self.half, EXACT, Fraction(-1, 2))

    def test_fold_e1z_closed_form(self):
        folded = fold(build_e1(self.full, self.p, Z), self.k)
        assert folded == fold_e1z_closed_form(self.half, self.p, self.k)

    @pytest.mark.parametrize("sign", [PLUS, MINUS])
    def test_fold_e1_gives_twisted_generator(self, sign):
        folded = fold(build_e1(self.full, self.p, sign), self.k)
        assert folded == scale(build_x(self.half, self.p, sign), 2)

    def test_x_needs_field(self):
        with pytest.raises(ParameterError):
            build_x(self.half, XxxParams(1, 0), PLUS)

    def test_x_sign(self):
        with pytest.raises(ParameterError):
            build_x(self.half, self.p, Z)


# ═══════════════════════════════════════════════════════════════════
# OPEN BOUNDARY FOLDING
# ═══════════════════════════════════════════════════════════════════

class TestOpenFolding:

    def setup_method(self):
        self.p = XxxParams(1)
        self.full = ChainSpec(3, FULL_LINE)
        self.half = self.full.half()
        self.ones = preset_constants(FoldPreset(ALL_ONES))

    def test_fold_hamiltonian(self):
        diff = fold(build_h_xxx(self.full, self.p), self.ones) - scale(build_h_open(self.half, self.p), 2)
        assert diff == identity(self.half, EXACT, Fraction(-3, 2))

    def test_fold_e1_reduces_to_level_zero(self):
        for a, sign in ((PLUS, -1), (MINUS, -1), (Z, 1)):
            folded = fold(build_e1(self.full, self.p, a), self.ones)
            assert folded == linear_combine([(sign * self.p.lam, build_e0(self.half, a))])


# ═══════════════════════════════════════════════════════════════════
# LEVEL-2 OPERATORS
# ═══════════════════════════════════════════════════════════════════

class TestLevelTwo:

    def setup_method(self):
        self.p = XxxParams(1)
        self.full = ChainSpec(3, FULL_LINE)
        self.half = self.full.half()
        self.ones = preset_constants(FoldPreset(ALL_ONES))

    @pytest.mark.parametrize("a,sign", [(PLUS, -1), (MINUS, 1)])
    def test_e2_is_commutator_of_e1(self, a, sign):
        bracket = commutator(build_e1(self.full, self.p, Z), build_e1(self.full, self.p, a))
        assert build_e2(self.full, self.p, a) == scale(bracket, Fraction(sign, 2))

    def test_e2z(self):
        bracket = commutator(build_e1(self.full, self.p, PLUS), build_e1(self.full, self.p, MINUS))
        assert build_e2(self.full, self.p, Z) == bracket

    @pytest.mark.parametrize("a", [PLUS, MINUS, Z])
    def test_fold_e2_tilde_gives_g(self, a):
        folded = fold(build_e2(self.full, self.p, a, tilde=True), self.ones)
        assert folded == scale(build_g(self.half, self.p, a), Fraction(8, 3))

    @pytest.mark.parametrize("a", [PLUS, MINUS, Z])
    def test_fold_e2_tilde_gives_g_for_other_lambda(self, a):
        p = XxxParams(2)
        folded = fold(build_e2(self.full, p, a, tilde=True), self.ones)
        assert folded == scale(build_g(self.half, p, a), Fraction(8, 3))

    @pytest.mark.parametrize("a", [PLUS, MINUS, Z])
    def test_g_commutes_with_open_hamiltonian_in_interior(self, a):
        half = ChainSpec(4, HALF_LINE)
        report = check_symmetry(build_h_open(half, self.p), build_g(half, self.p, a), 2)
        assert report.status in (EXACT_ZERO, EDGE_LOCALIZED)

    def test_g_needs_half_line(self):
        with pytest.raises(GeometryError):
            build_g(self.full, self.p, PLUS)
