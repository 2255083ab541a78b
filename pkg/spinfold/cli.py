"""
spinfold command line

Subcommands:
    verify      run a named check suite (default chosen from --model/--boundary)
    fold        fold an operator expression, optionally diff against another
    relations   run the algebra relation checks for the configured model
    print       print an operator with term count, support histogram, hermiticity
    kernels     write the long-range kernel table as CSV

Run configuration precedence: built-in defaults < TOML file (--config) < flags.
Exit codes: 0 all checks as expected, 1 check failure, 2 usage error.

Examples:
    python -m spinfold verify --model xxx --boundary magnetic --L 5 --mu 3/2
    python -m spinfold fold Hxxx --preset all-ones --diff "2*H0" --allow-constant
    python -m spinfold relations yangian --model xxx --L 4
    python -m spinfold print Mkmu --model ino --kappa 20 --mu 1 --L 4
    python -m spinfold kernels --kappa 1 --z-max 6
"""

import argparse
import json
import logging
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, fields
from datetime import datetime
from typing import Dict, List, Optional

import pandas as pd

from spinfold import config
from spinfold.errors import ChainMismatchError, GeometryError, OracleCapError, ParameterError, UnknownOperatorError
from spinfold.folding import (
    INO_MAGNETIC, PRESET_KINDS, XXX_MAGNETIC, FoldPreset, describe_constants, fold_any, load_constants,
    preset_constants,
)
from spinfold.model_inozemtsev import kernel_table
from spinfold.operators import MODELS, OperatorContext, build_expression
from spinfold.pauli_algebra import (
    is_hermitian, largest_term, render, support_histogram,
)
from spinfold.scalars import EXACT, FIELDS, FLOAT, format_scalar, parse_param
from spinfold.suites import DEFAULT_SUITE, LONG_RANGE_SUITES, SUITES, relation_checks
from spinfold.verify import CheckResult, check_fold_identity, run_checks, run_suite

logger = logging.getLogger(__name__)

BOUNDARIES = ('bulk', 'magnetic', 'open', 'diagonal')
FORMATS = ('text', 'json')
DOUBLE_MODELS = ('double-xxx', 'double-ino')
LONG_RANGE_MODELS = ('ino', 'double-ino')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Invalid flag combination."""


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

@dataclass
class RunConfig:
    model: str = 'xxx'
    boundary: Optional[str] = None
    L: int = config.DEFAULT_CHAIN_LENGTH
    lam: str = config.DEFAULT_LAMBDA
    mu: Optional[str] = config.DEFAULT_MU
    kappa: Optional[float] = None
    edge_window: Optional[int] = None
    tol_identity: Optional[float] = None
    tol_edge: Optional[float] = None
    field: Optional[str] = None
    seed: int = config.DEFAULT_SEED
    format: str = 'text'
    suite: Optional[str] = None
    threads: Optional[int] = None

    def validate(self) -> 'RunConfig':
        """Fill model-dependent defaults and reject invalid combinations."""
        if self.model not in MODELS:
            raise UsageError(f"--model must be one of {MODELS}, got {self.model!r}")
        if self.boundary is None:
            self.boundary = 'diagonal' if self.model in DOUBLE_MODELS else 'bulk'
        if self.boundary not in BOUNDARIES:
            raise UsageError(f"--boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if (self.boundary == 'diagonal') != (self.model in DOUBLE_MODELS):
            raise UsageError("The diagonal boundary goes with the double-row models only")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}, got {self.format!r}")
        if not isinstance(self.L, int) or self.L < 1:
            raise UsageError(f"--L must be a positive integer, got {self.L!r}")
        long_range = self.model in LONG_RANGE_MODELS
        if self.field is None:
            self.field = FLOAT if long_range else EXACT
        if self.field not in FIELDS:
            raise UsageError(f"--field must be one of {FIELDS}, got {self.field!r}")
        if long_range and self.field == EXACT:
            raise UsageError("Long-range models use float arithmetic; drop --field exact")
        if long_range and self.kappa is None:
            raise UsageError(f"--kappa is required with --model {self.model}")
        if self.kappa is not None and not self.kappa > 0:
            raise UsageError(f"--kappa must be positive, got {self.kappa}")
        lam = parse_param(self.lam, self.field)
        if lam == 0:
            raise UsageError("--lambda must be nonzero")
        if self.boundary == 'magnetic' and (self.mu is None or parse_param(self.mu, self.field) == 0):
            raise UsageError("The magnetic boundary needs --mu != 0")
        if self.suite is not None and self.suite != 'all' and self.suite not in SUITES:
            raise UsageError(f"Unknown suite {self.suite!r} (available: all, {', '.join(SUITES)})")
        return self

    def to_dict(self) -> Dict:
        return asdict(self)


_FLAG_KEYS = {
    'model': 'model', 'boundary': 'boundary', 'L': 'L', 'lam': 'lam', 'mu': 'mu', 'kappa': 'kappa',
    'edge_window': 'edge_window', 'tol_identity': 'tol_identity', 'tol_edge': 'tol_edge',
    'field': 'field', 'seed': 'seed', 'format': 'format', 'suite': 'suite', 'threads': 'threads',
}
# TOML spellings that differ from the dataclass
_TOML_ALIASES = {'lambda': 'lam', 'edge-window': 'edge_window', 'tol-identity': 'tol_identity',
                 'tol-edge': 'tol_edge'}


def load_toml(path: str) -> Dict:
    try:
        with open(path, 'rb') as f:
            raw = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise UsageError(f"Cannot read config file {path}: {e}") from e
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in raw.items():
        name = _TOML_ALIASES.get(key, key)
        if name not in known:
            raise UsageError(f"Unknown key '{key}' in {path}")
        out[name] = str(value) if name in ('lam', 'mu') else value
    return out


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Defaults < TOML < flags."""
    values: Dict = {}
    if getattr(args, 'config', None):
        values.update(load_toml(args.config))
        logger.info(f"[CONFIG] Loaded {args.config}")
    for attr, name in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[name] = value
    return RunConfig(**values).validate()


# ============================================================================
# LOGGING
# ============================================================================

def setup_logging(log_dir: Optional[str] = None, level: Optional[str] = None):
    """File handler (spinfold_YYYYMMDD.log) plus stderr; stdout carries reports only."""
    log_dir = log_dir or config.LOG_DIR
    os.makedirs(log_dir, exist_ok=True)
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    file_handler = logging.FileHandler(os.path.join(log_dir, f'spinfold_{datetime.now().strftime("%Y%m%d")}.log'))
    file_handler.setFormatter(formatter)
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    logging.basicConfig(
        level=getattr(logging, (level or config.LOG_LEVEL).upper(), logging.INFO),
        handlers=[file_handler, stream_handler],
        force=True,
    )


# ============================================================================
# OUTPUT
# ============================================================================

def _emit_results(results: List[CheckResult], fmt: str, out=None):
    out = out or sys.stdout
    if fmt == 'json':
        for r in results:
            out.write(json.dumps(r.to_dict()) + '\n')
        return
    rows = [{
        'check': r.check,
        'status': r.status if not r.error else 'Error',
        'expected': r.expected,
        'ok': 'yes' if r.ok else 'NO',
        'max_interior': r.max_interior,
        'constant': format_scalar(r.constant) if r.constant is not None else '',
        'ms': r.elapsed_ms,
        'witness': r.error or r.witness or '',
    } for r in results]
    table = pd.DataFrame(rows, columns=['check', 'status', 'expected', 'ok', 'max_interior', 'constant', 'ms',
                                        'witness'])
    out.write(table.to_string(index=False) + '\n')
    failed = sum(1 for r in results if not r.ok)
    out.write(f"\n{len(results) - failed}/{len(results)} checks as expected\n")


def _exit_code(results: List[CheckResult]) -> int:
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite == 'all':
        names = [n for n in SUITES if cfg.kappa is not None or n not in LONG_RANGE_SUITES]
    elif cfg.suite:
        names = [cfg.suite]
    else:
        names = [DEFAULT_SUITE[(cfg.model, cfg.boundary)]]
    if any(n in LONG_RANGE_SUITES for n in names) and cfg.kappa is None:
        raise UsageError(f"Suite {names} needs --kappa")
    results: List[CheckResult] = []
    for name in names:
        results.extend(run_suite(name, cfg, cfg.threads))
    results.sort(key=lambda r: r.check)
    _emit_results(results, cfg.format)
    return _exit_code(results)


def _constants_for(cfg: RunConfig, args: argparse.Namespace, field: str):
    if args.table:
        return load_constants(args.table)
    kind = args.preset or (INO_MAGNETIC if cfg.model in LONG_RANGE_MODELS and cfg.boundary == 'magnetic'
                           else XXX_MAGNETIC)
    if kind == XXX_MAGNETIC:
        return preset_constants(FoldPreset(kind, lam=parse_param(cfg.lam, field), mu=parse_param(cfg.mu, field)))
    return preset_constants(FoldPreset(kind, sign=args.sign))


def cmd_fold(cfg: RunConfig, args: argparse.Namespace) -> int:
    ctx = OperatorContext.from_config(cfg)
    expr = ' '.join(args.operator)
    op = build_expression(expr, ctx)
    constants = _constants_for(cfg, args, op.field)
    logger.info(f"[FOLD] {constants.name}: {describe_constants(constants)}")
    folded = fold_any(op, constants)
    if not args.diff:
        if cfg.format == 'json':
            sys.stdout.write(json.dumps({'operator': expr, 'constants': constants.name,
                                         'chain': folded.chain.to_dict(), 'terms': len(folded.terms),
                                         'render': render(folded, config.REPORT_PRUNE)}) + '\n')
        else:
            sys.stdout.write(render(folded, config.REPORT_PRUNE) + '\n')
        return EXIT_OK
    rhs = build_expression(args.diff, ctx, chain=folded.chain)
    report = check_fold_identity(folded, rhs, allow_constant=args.allow_constant, tol=cfg.tol_identity,
                                 relation=f"fold({expr}) - ({args.diff})")
    if cfg.format == 'json':
        sys.stdout.write(json.dumps(report.to_dict()) + '\n')
    else:
        sys.stdout.write(f"{report.relation}: {report.status}\n")
        if report.constant is not None:
            sys.stdout.write(f"constant: {format_scalar(report.constant)}\n")
        if report.witness:
            sys.stdout.write(f"witness: {report.witness}\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_relations(cfg: RunConfig, algebra: str) -> int:
    results = run_checks(relation_checks(algebra, cfg), cfg.threads)
    _emit_results(results, cfg.format)
    return _exit_code(results)


def cmd_print(cfg: RunConfig, operator: List[str]) -> int:
    ctx = OperatorContext.from_config(cfg)
    expr = ' '.join(operator)
    op = build_expression(expr, ctx)
    tol = 0.0 if op.field == EXACT else config.TOL_IDENTITY
    hist = support_histogram(op)
    top = largest_term(op)
    info = {
        'operator': expr,
        'chain': op.chain.to_dict(),
        'field': op.field,
        'terms': len(op.terms),
        'support_histogram': {str(k): v for k, v in sorted(hist.items())},
        'hermitian': is_hermitian(op, tol),
        'largest': f"{format_scalar(top[1])} * {top[0].render()}" if top else None,
        'render': render(op, config.REPORT_PRUNE),
    }
    if cfg.format == 'json':
        sys.stdout.write(json.dumps(info) + '\n')
        return EXIT_OK
    sys.stdout.write(info['render'] + '\n\n')
    sys.stdout.write(f"terms: {info['terms']}\n")
    sys.stdout.write(f"support: {', '.join(f'{k}-site x{v}' for k, v in info['support_histogram'].items())}\n")
    sys.stdout.write(f"largest: {info['largest']}\n")
    sys.stdout.write(f"hermitian: {info['hermitian']}\n")
    return EXIT_OK


def cmd_kernels(kappa: Optional[float], z_max: int, csv_path: Optional[str]) -> int:
    if kappa is None:
        raise UsageError("kernels needs --kappa")
    table = kernel_table(kappa, z_max)
    if csv_path:
        table.to_csv(csv_path, index=False)
        logger.info(f"[CONFIG] Kernel table written to {csv_path}")
    else:
        sys.stdout.write(table.to_csv(index=False))
    return EXIT_OK


# ============================================================================
# ARGUMENTS
# ============================================================================

def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument('--config', help='TOML file mirroring the run configuration')
    p.add_argument('--model', choices=MODELS, help='xxx | ino | double-xxx | double-ino (default xxx)')
    p.add_argument('--boundary', choices=BOUNDARIES, help='bulk | magnetic | open | diagonal')
    p.add_argument('--L', type=int, help=f'Chain half-length (default {config.DEFAULT_CHAIN_LENGTH})')
    p.add_argument('--lambda', dest='lam', help='Hopping strength, p/q accepted (default 1)')
    p.add_argument('--mu', help='Boundary field, p/q accepted (default 3/2)')
    p.add_argument('--kappa', type=float, help='Inverse range of the long-range models (required there)')
    p.add_argument('--edge-window', dest='edge_window', type=int, help='Edge window for residual classification')
    p.add_argument('--tol-identity', dest='tol_identity', type=float, help='Float tolerance for identities')
    p.add_argument('--tol-edge', dest='tol_edge', type=float, help='Float tolerance for edge residuals')
    p.add_argument('--field', choices=FIELDS, help='exact (rational) or float arithmetic')
    p.add_argument('--seed', type=int, help='Seed for random operators')
    p.add_argument('--format', choices=FORMATS, help='text (default) or json')
    p.add_argument('--threads', type=int, help='Worker threads (default SPINFOLD_THREADS)')
    p.add_argument('--log-dir', dest='log_dir', help='Log directory (default SPINFOLD_LOG_DIR)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='spinfold', description='Folding and symmetry checks for spin chains')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify', help='Run a check suite')
    _add_run_flags(p)
    p.add_argument('--suite', help=f"all | {' | '.join(SUITES)}")

    p = sub.add_parser('fold', help='Fold an operator expression')
    _add_run_flags(p)
    p.add_argument('operator', nargs='+', help="Operator expression, e.g. E1+ or 'G z'")
    p.add_argument('--preset', choices=PRESET_KINDS, help='Folding constant preset')
    p.add_argument('--sign', type=int, choices=(1, -1), default=1, help='Sign of the ino-magnetic preset')
    p.add_argument('--table', help='JSON folding constant table (overrides --preset)')
    p.add_argument('--diff', help='Compare the fold with this expression')
    p.add_argument('--allow-constant', dest='allow_constant', action='store_true',
                   help='Accept a multiple of the identity as difference')

    p = sub.add_parser('relations', help='Check algebra relations')
    _add_run_flags(p)
    p.add_argument('algebra', choices=('yangian', 'twisted-plus', 'twisted-minus', 'diagonal'))

    p = sub.add_parser('print', help='Print an operator')
    _add_run_flags(p)
    p.add_argument('operator', nargs='+', help='Operator expression')

    p = sub.add_parser('kernels', help='Write the kernel table as CSV')
    p.add_argument('--kappa', type=float, help='Inverse range')
    p.add_argument('--z-max', dest='z_max', type=int, default=config.KERNEL_Z_MAX, help='Largest |z|')
    p.add_argument('--csv', help='Output path (default stdout)')
    p.add_argument('--log-dir', dest='log_dir', help='Log directory')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_dir)
    try:
        if args.command == 'kernels':
            return cmd_kernels(args.kappa, args.z_max, args.csv)
        cfg = build_run_config(args)
        logger.info(f"[CONFIG] {args.command}: {cfg.to_dict()}")
        if args.command == 'verify':
            return cmd_verify(cfg)
        if args.command == 'fold':
            return cmd_fold(cfg, args)
        if args.command == 'relations':
            return cmd_relations(cfg, args.algebra)
        return cmd_print(cfg, args.operator)
    except (UsageError, ParameterError, UnknownOperatorError, GeometryError, ChainMismatchError,
            OracleCapError) as e:
        logger.error(f"[CONFIG] {type(e).__name__}: {e}")
        return EXIT_USAGE
