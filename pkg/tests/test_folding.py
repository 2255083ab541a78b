"""
Tests for folding constants and the folding maps.

Covers:
- Constant tables: defaults, k^00 invariant, key parsing, JSON codec
- Key aliases: p/m letters, sign groups (pm0, 0pm, pmz, zpm) and key lists (pm mp)
- Presets: xxx-magnetic entries and the k^{-+} - k^{+-} gap, ino-magnetic signs
- fold: single-site and mirrored-pair products, geometry checks
- fold_double: circle/bullet pairing
- fold_quadratic
"""

import os
import sys
from fractions import Fraction

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from spinfold.errors import GeometryError, ParameterError
from spinfold.folding import (
    ALL_ONES, INO_MAGNETIC, XXX_MAGNETIC, FoldPreset, FoldingConstants, fold, fold_any, fold_double,
    constants_from_table, expand_key, fold_quadratic, load_constants, parse_key, preset_constants,
    save_constants,
)
from spinfold.model_xxx import build_e0
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, IDENTITY, MINUS, PLUS, ROW_BULLET, ROW_CIRCLE, Z,
    ChainSpec, from_terms, identity, multiply, scale, site_op,
)
from spinfold.scalars import EXACT, FLOAT


# ═══════════════════════════════════════════════════════════════════
# CONSTANT TABLES
# ═══════════════════════════════════════════════════════════════════

class TestFoldingConstants:

    def test_defaults_are_one(self):
        k = FoldingConstants()
        assert k.k(PLUS, MINUS) == 1
        assert k.k(IDENTITY, IDENTITY) == 1

    def test_k00_must_be_one(self):
        with pytest.raises(ParameterError):
            FoldingConstants({(IDENTITY, IDENTITY): 2})

    def test_string_keys(self):
        k = FoldingConstants({'z+': Fraction(1, 2)})
        assert k.k(Z, PLUS) == Fraction(1, 2)
        assert parse_key('0z') == (IDENTITY, Z)
        with pytest.raises(ParameterError):
            parse_key('x+')

    def test_updated_keeps_original(self):
        k = FoldingConstants(name='base')
        k2 = k.updated({'+-': 3})
        assert k2.k(PLUS, MINUS) == 3
        assert k.k(PLUS, MINUS) == 1

    def test_json_codec(self, tmp_path):
        k = preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(3, 2)))
        path = tmp_path / 'k.json'
        save_constants(k, path)
        loaded = load_constants(path)
        assert loaded == k
        assert loaded.k(PLUS, MINUS) == -3


# ═══════════════════════════════════════════════════════════════════
# KEY ALIASES
# ═══════════════════════════════════════════════════════════════════

class TestKeyAliases:

    @pytest.mark.parametrize("name,expected", [
        ("pm0", [(PLUS, IDENTITY), (MINUS, IDENTITY)]),
        ("0pm", [(IDENTITY, PLUS), (IDENTITY, MINUS)]),
        ("pmz", [(PLUS, Z), (MINUS, Z)]),
        ("zpm", [(Z, PLUS), (Z, MINUS)]),
        ("pm mp", [(PLUS, MINUS), (MINUS, PLUS)]),
        ("mz", [(MINUS, Z)]),
        ("+-", [(PLUS, MINUS)]),
    ])
    def test_expand_key(self, name, expected):
        assert expand_key(name) == expected

    def test_parse_key_needs_single_entry(self):
        assert parse_key("pz") == (PLUS, Z)
        with pytest.raises(ParameterError):
            parse_key("pmz")

    @pytest.mark.parametrize("name", ["", "pq", "pmx", "pmzz"])
    def test_bad_keys(self, name):
        with pytest.raises(ParameterError):
            expand_key(name)

    def test_table_broadcasts_single_value(self):
        k = constants_from_table({"zpm": ["1/2", "0"], "zz": ["-1", "0"]})
        assert k.k(Z, PLUS) == Fraction(1, 2)
        assert k.k(Z, MINUS) == Fraction(1, 2)
        assert k.k(Z, Z) == -1

    def test_table_per_entry_values(self):
        k = constants_from_table({"pm mp": [["-2", "0"], ["2", "0"]], "pmz": [["1/2", "0"], ["-1/2", "0"]]})
        assert k.k(PLUS, MINUS) == -2
        assert k.k(MINUS, PLUS) == 2
        assert k.k(PLUS, Z) == Fraction(1, 2)
        assert k.k(MINUS, Z) == Fraction(-1, 2)

    def test_table_value_count_must_match(self):
        with pytest.raises(ParameterError):
            constants_from_table({"pm mp": [["1", "0"], ["2", "0"], ["3", "0"]]})

    def test_grouped_override(self):
        k = FoldingConstants().updated({"pm0": 3})
        assert k.k(PLUS, IDENTITY) == 3
        assert k.k(MINUS, IDENTITY) == 3


# ═══════════════════════════════════════════════════════════════════
# PRESETS
# ═══════════════════════════════════════════════════════════════════

class TestPresets:

    def test_xxx_magnetic_entries(self):
        k = preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(3, 2)))
        assert k.k(PLUS, MINUS) == -3
        assert k.k(MINUS, PLUS) == 3
        assert k.k(Z, PLUS) == Fraction(2, 3)
        assert k.k(PLUS, Z) == Fraction(2, 3)
        assert k.k(Z, MINUS) == Fraction(-2, 3)
        assert k.k(IDENTITY, PLUS) == -1
        assert k.k(PLUS, IDENTITY) == 1
        assert k.k(Z, Z) == 1

    def test_xxx_magnetic_derives_partner(self):
        k = preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(1), k_pm=Fraction(1)))
        assert k.k(MINUS, PLUS) == 5

    def test_xxx_magnetic_rejects_wrong_gap(self):
        with pytest.raises(ParameterError):
            preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(1), k_pm=0, k_mp=1))

    def test_xxx_magnetic_needs_mu(self):
        with pytest.raises(ParameterError):
            preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(0)))

    def test_ino_magnetic_sign(self):
        plus = preset_constants(FoldPreset(INO_MAGNETIC, sign=1))
        minus = preset_constants(FoldPreset(INO_MAGNETIC, sign=-1))
        assert plus.k(PLUS, MINUS) == 2 and plus.k(MINUS, PLUS) == -2
        assert minus.k(PLUS, MINUS) == -2 and minus.k(Z, PLUS) == Fraction(-1, 2)
        with pytest.raises(ParameterError):
            preset_constants(FoldPreset(INO_MAGNETIC, sign=0))

    def test_unknown_preset(self):
        with pytest.raises(ParameterError):
            preset_constants(FoldPreset('periodic'))


# ═══════════════════════════════════════════════════════════════════
# FOLD
# ═══════════════════════════════════════════════════════════════════

class TestFold:

    def setup_method(self):
        self.full = ChainSpec(2, FULL_LINE)
        self.half = self.full.half()
        self.ones = preset_constants(FoldPreset(ALL_ONES))
        self.magnetic = preset_constants(FoldPreset(XXX_MAGNETIC, lam=Fraction(1), mu=Fraction(3, 2)))

    def test_e0z_doubles(self):
        folded = fold(build_e0(self.full, Z), self.magnetic)
        assert folded == scale(build_e0(self.half, Z), 2)

    def test_e0_plus_cancels_under_magnetic(self):
        assert fold(build_e0(self.full, PLUS), self.magnetic).is_zero()
        assert fold(build_e0(self.full, PLUS), self.ones) == scale(build_e0(self.half, PLUS), 2)

    def test_mirrored_pair_reduces(self):
        # s+_0 s-_1 -> k^{+-} s+_0 s-_0 = -3 (1/2 + 1/2 sz_0)
        a = from_terms(self.full, EXACT, [(1, [(0, PLUS), (1, MINUS)])])
        expected = identity(self.half, EXACT, Fraction(-3, 2)) + site_op(self.half, EXACT, Z, 0, coeff=Fraction(-3, 2))
        assert fold(a, self.magnetic) == expected

    def test_left_generator_first(self):
        # s+_1 sz_0: site 0 takes (z, +), sz s+ = s+
        a = from_terms(self.full, EXACT, [(1, [(0, Z), (1, PLUS)])])
        assert fold(a, self.ones) == site_op(self.half, EXACT, PLUS, 0)

    def test_zz_mirror_gives_constant(self):
        a = from_terms(self.full, EXACT, [(1, [(0, Z), (1, Z)])])
        assert fold(a, self.ones) == identity(self.half)

    def test_fold_needs_full_line(self):
        with pytest.raises(GeometryError):
            fold(build_e0(self.half, Z), self.ones)

    def test_float_field(self):
        folded = fold(build_e0(self.full, Z, FLOAT), self.magnetic)
        assert folded.field == FLOAT
        assert folded == scale(build_e0(self.half, Z, FLOAT), 2)

    def test_fold_quadratic(self):
        p, q = site_op(self.full, EXACT, Z, 0), site_op(self.full, EXACT, Z, 1)
        assert fold_quadratic([(1, p, q)], self.ones) == fold(multiply(p, q), self.ones)
        with pytest.raises(ParameterError):
            fold_quadratic([], self.ones)


class TestFoldDouble:

    def setup_method(self):
        self.full = ChainSpec(1, FULL_LINE, rows=2)
        self.half = self.full.half()
        self.ones = preset_constants(FoldPreset(ALL_ONES))

    def test_circle_pairs_with_mirrored_bullet(self):
        a = from_terms(self.full, EXACT, [(1, [((ROW_CIRCLE, 0), PLUS), ((ROW_CIRCLE, 1), Z)])])
        expected = from_terms(self.half, EXACT, [(1, [((ROW_CIRCLE, 0), PLUS), ((ROW_BULLET, 0), Z)])])
        assert fold_double(a, self.ones) == expected

    def test_dispatch(self):
        a = from_terms(self.full, EXACT, [(1, [((ROW_BULLET, 1), MINUS)])])
        assert fold_any(a, self.ones) == from_terms(self.half, EXACT, [(1, [((ROW_CIRCLE, 0), MINUS)])])

    def test_needs_two_rows(self):
        with pytest.raises(GeometryError):
            fold_double(build_e0(ChainSpec(1, FULL_LINE), Z), self.ones)
