"""
Tests for the operator registry and the command line.

Covers:
- Operator ids: normalisation, ^- half-line suffix, unknown and invalid ids
- Expression parsing and evaluation (coefficients, ID)
- RunConfig validation and TOML loading
- main(): fold with --diff, usage errors -> exit 2, kernels CSV, verify JSON lines
"""

import json
import os
import sys
from argparse import Namespace
from fractions import Fraction

import pandas as pd
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from spinfold.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, build_run_config, load_toml, main
from spinfold.errors import ParameterError, UnknownOperatorError
from spinfold.model_xxx import XxxParams, build_e0, build_x
from spinfold.operators import (
    OperatorContext, build_expression, build_operator, normalize_id, operator_chain, parse_expression,
)
from spinfold.pauli_algebra import FULL_LINE, HALF_LINE, PLUS, Z, ChainSpec, identity, linear_combine, scale
from spinfold.scalars import EXACT, FLOAT


# ═══════════════════════════════════════════════════════════════════
# OPERATOR REGISTRY
# ═══════════════════════════════════════════════════════════════════

class TestOperatorIds:

    def setup_method(self):
        self.ctx = OperatorContext(L=3, lam='1', mu='3/2')

    def test_spaces_ignored(self):
        assert normalize_id(' G z ') == 'Gz'
        assert build_operator('E0 z', self.ctx) == build_operator('E0z', self.ctx)

    def test_bulk_ids_on_full_line(self):
        assert operator_chain('E1+', self.ctx) == ChainSpec(3, FULL_LINE)
        assert operator_chain('Hoo', self.ctx) == ChainSpec(3, FULL_LINE, rows=2)

    def test_half_suffix(self):
        assert operator_chain('E0z^-', self.ctx) == ChainSpec(3, HALF_LINE)
        assert build_operator('E0z^-', self.ctx) == build_e0(ChainSpec(3, HALF_LINE), Z)

    def test_half_suffix_only_for_bulk(self):
        with pytest.raises(UnknownOperatorError):
            build_operator('H0^-', self.ctx)

    def test_unknown_id(self):
        with pytest.raises(UnknownOperatorError):
            build_operator('Q7', self.ctx)

    def test_level_zero_has_no_prime(self):
        with pytest.raises(UnknownOperatorError):
            build_operator("A0z'", OperatorContext(L=2, model='double-xxx'))

    def test_long_range_needs_kappa(self):
        with pytest.raises(ParameterError):
            build_operator('Hk', OperatorContext(L=2, field=FLOAT, model='ino'))


class TestExpressions:

    def setup_method(self):
        self.ctx = OperatorContext(L=3, lam='1', mu='3/2')
        self.half = ChainSpec(3, HALF_LINE)

    def test_parse(self):
        assert parse_expression('2*H0 - 3/2*ID') == [(1, '2', 'H0'), (-1, '3/2', 'ID')]
        assert parse_expression('X+') == [(1, '1', 'X+')]

    def test_empty(self):
        with pytest.raises(UnknownOperatorError):
            parse_expression('   ')

    def test_scaled_operator(self):
        expected = scale(build_x(self.half, XxxParams(1, Fraction(3, 2)), PLUS), 2)
        assert build_expression('2*X+', self.ctx) == expected

    def test_identity_term(self):
        result = build_expression('E0z^- - 1/2*ID', self.ctx)
        expected = linear_combine([(1, build_e0(self.half, Z)), (Fraction(-1, 2), identity(self.half))])
        assert result == expected

    def test_identity_alone_needs_chain(self):
        with pytest.raises(UnknownOperatorError):
            build_expression('3*ID', self.ctx)
        assert build_expression('3*ID', self.ctx, chain=self.half) == identity(self.half, EXACT, 3)


# ═══════════════════════════════════════════════════════════════════
# RUN CONFIGURATION
# ═══════════════════════════════════════════════════════════════════

class TestRunConfig:

    def test_defaults(self):
        cfg = RunConfig().validate()
        assert cfg.boundary == 'bulk'
        assert cfg.field == EXACT

    def test_long_range_defaults_to_float(self):
        cfg = RunConfig(model='ino', kappa=1.0).validate()
        assert cfg.field == FLOAT

    def test_long_range_needs_kappa(self):
        with pytest.raises(UsageError):
            RunConfig(model='ino').validate()

    def test_long_range_rejects_exact(self):
        with pytest.raises(UsageError):
            RunConfig(model='ino', kappa=1.0, field=EXACT).validate()

    def test_double_models_use_diagonal(self):
        assert RunConfig(model='double-xxx').validate().boundary == 'diagonal'
        with pytest.raises(UsageError):
            RunConfig(model='xxx', boundary='diagonal').validate()

    def test_magnetic_needs_field(self):
        with pytest.raises(UsageError):
            RunConfig(boundary='magnetic', mu='0').validate()

    def test_toml_then_flags(self, tmp_path):
        path = tmp_path / 'run.toml'
        path.write_text('lambda = "1/2"\nL = 5\nedge-window = 1\n')
        assert load_toml(str(path)) == {'lam': '1/2', 'L': 5, 'edge_window': 1}
        cfg = build_run_config(Namespace(config=str(path), L=2))
        assert cfg.lam == '1/2' and cfg.L == 2 and cfg.edge_window == 1

    def test_toml_unknown_key(self, tmp_path):
        path = tmp_path / 'run.toml'
        path.write_text('colour = "red"\n')
        with pytest.raises(UsageError):
            load_toml(str(path))


# ═══════════════════════════════════════════════════════════════════
# COMMAND LINE
# ═══════════════════════════════════════════════════════════════════

class TestMain:

    def test_fold_open_hamiltonian(self, tmp_path, capsys):
        code = main(['fold', 'Hxxx', '--preset', 'all-ones', '--diff', '2*H0', '--allow-constant',
                     '--L', '3', '--log-dir', str(tmp_path)])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert 'ConstantOnly' in out
        assert 'constant: (-3/2,0)' in out

    def test_fold_constant_rejected_without_flag(self, tmp_path):
        code = main(['fold', 'Hxxx', '--preset', 'all-ones', '--diff', '2*H0', '--L', '3',
                     '--log-dir', str(tmp_path)])
        assert code == EXIT_FAILED

    def test_fold_json(self, tmp_path, capsys):
        code = main(['fold', 'E0z', '--preset', 'xxx-magnetic', '--diff', '2*E0z^-', '--L', '3',
                     '--format', 'json', '--log-dir', str(tmp_path)])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert report['status'] == 'ExactZero'

    def test_missing_kappa_is_usage_error(self, tmp_path):
        assert main(['verify', '--model', 'ino', '--L', '3', '--log-dir', str(tmp_path)]) == EXIT_USAGE

    def test_unknown_operator_is_usage_error(self, tmp_path):
        assert main(['print', 'Nope', '--L', '2', '--log-dir', str(tmp_path)]) == EXIT_USAGE

    def test_print(self, tmp_path, capsys):
        assert main(['print', 'Hxxx', '--L', '2', '--log-dir', str(tmp_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert 'terms: 9' in out
        assert 'hermitian: True' in out

    def test_kernels_csv(self, tmp_path):
        csv_path = tmp_path / 'kernels.csv'
        code = main(['kernels', '--kappa', '1', '--z-max', '2', '--csv', str(csv_path),
                     '--log-dir', str(tmp_path)])
        df = pd.read_csv(csv_path)
        assert code == EXIT_OK
        assert list(df['z']) == [-2, -1, 0, 1, 2]
        assert df.loc[df['z'] == 1, 'p'].iloc[0] == pytest.approx(1.0)

    def test_kernels_needs_kappa(self, tmp_path):
        assert main(['kernels', '--log-dir', str(tmp_path)]) == EXIT_USAGE

    def test_verify_json_lines(self, tmp_path, capsys):
        code = main(['verify', '--suite', 'xxx-bulk', '--L', '3', '--format', 'json', '--log-dir', str(tmp_path)])
        lines = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]
        assert code == EXIT_OK
        assert lines and all({'check', 'status', 'expected'} <= set(line) for line in lines)
        assert [line['check'] for line in lines] == sorted(line['check'] for line in lines)
