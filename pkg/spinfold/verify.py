"""
Verification Engine

- classify: sorts a residual operator into ExactZero / ConstantOnly /
  EdgeLocalized / Fail using edge_partition
- check_fold_identity, check_symmetry: single-identity checks
- check_yangian, check_twisted_plus, check_twisted_minus, check_diagonal:
  the defining relations of the four algebras, each relation classified
  like a symmetry residual
- search_folding_constants: grid search for folding constants that make a
  folded pair commute in the interior
- run_checks / run_suite: thread-pool runner producing CheckResults

Checks never raise on a failing identity; they return reports. Exact-field
residuals are classified without tolerances.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations, product as grid_product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from spinfold import config
from spinfold.errors import ParameterError
from spinfold.folding import (
    FoldPreset, FoldingConstants, INO_MAGNETIC, XXX_MAGNETIC, fold, parse_key, preset_constants,
)
from spinfold.pauli_algebra import (
    MINUS, PLUS, Z, ChainSpec, OperatorSum, commutator, constant_term, edge_partition, identity,
    largest_term, linear_combine, max_coefficient, multiply, product, without_constant,
)
from spinfold.scalars import EXACT, FLOAT, format_scalar, magnitude, to_jsonable

logger = logging.getLogger(__name__)

EXACT_ZERO = 'ExactZero'
CONSTANT_ONLY = 'ConstantOnly'
EDGE_LOCALIZED = 'EdgeLocalized'
FAIL = 'Fail'
STATUS_RANK = {EXACT_ZERO: 0, CONSTANT_ONLY: 1, EDGE_LOCALIZED: 2, FAIL: 3}

EXPECT_PASS = 'pass'
EXPECT_FAIL = 'fail'


# ============================================================================
# REPORTS
# ============================================================================

@dataclass
class ResidualReport:
    """
    Classification of a residual operator.

    ExactZero: nothing survives. ConstantOnly: only the identity term.
    EdgeLocalized: interior (minus the identity) below tolerance.
    Fail: carries the largest interior term as witness.
    """
    status: str
    max_interior_coeff: float
    edge_window: int
    tolerance: float
    max_edge_coeff: float = 0.0
    constant: object = None
    witness: Optional[str] = None
    witness_coeff: object = None

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> Dict:
        return {
            'status': self.status,
            'max_interior': self.max_interior_coeff,
            'max_edge': self.max_edge_coeff,
            'constant': to_jsonable(self.constant),
            'witness': self.witness,
            'edge_window': self.edge_window,
            'tolerance': self.tolerance,
        }


@dataclass
class RelationParams:
    """lam, the Y+ shift c and alpha^+- with alpha^+ - alpha^- = 2c."""
    lam: object
    c: object
    alpha_plus: object
    alpha_minus: object

    def __post_init__(self):
        if abs(complex(self.alpha_plus - self.alpha_minus - 2 * self.c)) > 1e-12:
            raise ParameterError("alpha^+ - alpha^- must equal 2c")

    @classmethod
    def from_mu(cls, lam, mu) -> 'RelationParams':
        """alpha^+- = 1/2 (1 -+ lam/mu) as read off X^+-, hence c = -lam/(2mu)."""
        if mu == 0:
            raise ParameterError("mu must be nonzero")
        ratio = lam / mu
        return cls(lam=lam, c=-ratio / 2, alpha_plus=(1 - ratio) / 2, alpha_minus=(1 + ratio) / 2)


@dataclass
class RelationReport:
    """Outcome of one identity or a family of relations."""
    relation: str
    status: str
    max_residual: float
    field: str
    constant: object = None
    witness: Optional[str] = None
    details: Dict[str, ResidualReport] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def failing(self) -> List[str]:
        return [name for name, r in self.details.items() if r.status == FAIL]

    def to_dict(self) -> Dict:
        return {
            'relation': self.relation,
            'status': self.status,
            'max_residual': self.max_residual,
            'field': self.field,
            'constant': to_jsonable(self.constant),
            'witness': self.witness,
            'details': {name: r.to_dict() for name, r in self.details.items()},
        }


def _default_tol(op: OperatorSum, tol: Optional[float], fallback: float) -> float:
    if op.field == EXACT:
        return 0.0
    return fallback if tol is None else tol


def _witness(term) -> Tuple[Optional[str], object]:
    if term is None:
        return None, None
    string, coeff = term
    return f"{format_scalar(coeff)} * {string.render()}", coeff


def classify(residual: OperatorSum, edge_window: Optional[int] = None, tol: Optional[float] = None) -> ResidualReport:
    """Classify a residual via edge_partition; exact residuals ignore `tol`."""
    w = config.EDGE_WINDOW if edge_window is None else edge_window
    tol = _default_tol(residual, tol, config.TOL_EDGE)
    if max_coefficient(residual) <= tol:
        return ResidualReport(EXACT_ZERO, 0.0, w, tol, max_edge_coeff=0.0)
    edge, interior = edge_partition(residual, w)
    inner = without_constant(interior)
    max_inner, max_edge = max_coefficient(inner), max_coefficient(edge)
    const = constant_term(residual)
    if max_inner <= tol and max_edge <= tol:
        return ResidualReport(CONSTANT_ONLY, max_inner, w, tol, max_edge, constant=const)
    if max_inner <= tol:
        return ResidualReport(EDGE_LOCALIZED, max_inner, w, tol, max_edge,
                              constant=const if magnitude(const) > tol else None)
    text, coeff = _witness(largest_term(inner))
    return ResidualReport(FAIL, max_inner, w, tol, max_edge, constant=None, witness=text, witness_coeff=coeff)


def _combine(relation: str, field: str, details: Dict[str, ResidualReport]) -> RelationReport:
    status = max((r.status for r in details.values()), key=STATUS_RANK.get, default=EXACT_ZERO)
    worst = max((r.max_interior_coeff for r in details.values()), default=0.0)
    witness = next((f"{name}: {r.witness}" for name, r in details.items() if r.status == FAIL), None)
    return RelationReport(relation, status, worst, field, witness=witness, details=details)


# ============================================================================
# IDENTITY AND SYMMETRY CHECKS
# ============================================================================

def check_fold_identity(lhs: OperatorSum, rhs: OperatorSum, allow_constant: bool = False,
                        tol: Optional[float] = None, relation: str = 'fold-identity') -> RelationReport:
    """lhs - rhs must vanish, or be a multiple of the identity when allow_constant."""
    diff = lhs - rhs
    tol = _default_tol(diff, tol, config.TOL_IDENTITY)
    const = constant_term(diff)
    rest = without_constant(diff)
    max_rest = max_coefficient(rest)
    if max_coefficient(diff) <= tol:
        status = EXACT_ZERO
    elif max_rest <= tol and allow_constant:
        status = CONSTANT_ONLY
    else:
        status = FAIL
    witness = None
    if status == FAIL:
        witness, _ = _witness(largest_term(rest if max_rest > tol else diff))
    report = RelationReport(relation, status, max_rest if status != EXACT_ZERO else 0.0, diff.field,
                            constant=const if status == CONSTANT_ONLY else None, witness=witness)
    logger.debug(f"[CHECK] {relation}: {status} (max {report.max_residual:.3e})")
    return report


def check_symmetry(h: OperatorSum, q: OperatorSum, edge_window: Optional[int] = None,
                   tol: Optional[float] = None) -> ResidualReport:
    """Classify [h, q]."""
    return classify(commutator(h, q), edge_window, tol)


# ============================================================================
# ALGEBRA RELATIONS
# ============================================================================

def _linear_sl2_residuals(x: Dict[str, OperatorSum]) -> Dict[str, OperatorSum]:
    xp, xm, h = x[PLUS], x[MINUS], x[Z]
    return {
        '[h,x+]=2x+': linear_combine([(1, commutator(h, xp)), (-2, xp)]),
        '[h,x-]=-2x-': linear_combine([(1, commutator(h, xm)), (2, xm)]),
        '[x+,x-]=h': linear_combine([(1, commutator(xp, xm)), (-1, h)]),
    }


def _level_one_residuals(x: Dict[str, OperatorSum], j: Dict[str, OperatorSum], name: str) -> Dict[str, OperatorSum]:
    xp, xm, h = x[PLUS], x[MINUS], x[Z]
    jp, jm, jh = j[PLUS], j[MINUS], j[Z]
    return {
        f'[{name}(h),x+]=2{name}(x+)': linear_combine([(1, commutator(jh, xp)), (-2, jp)]),
        f'[{name}(h),x-]=-2{name}(x-)': linear_combine([(1, commutator(jh, xm)), (2, jm)]),
        f'[h,{name}(x+)]=2{name}(x+)': linear_combine([(1, commutator(h, jp)), (-2, jp)]),
        f'[h,{name}(x-)]=-2{name}(x-)': linear_combine([(1, commutator(h, jm)), (2, jm)]),
        f'[{name}(x+),x-]={name}(h)': linear_combine([(1, commutator(jp, xm)), (-1, jh)]),
        f'[{name}(x-),x+]=-{name}(h)': linear_combine([(1, commutator(jm, xp)), (1, jh)]),
    }


def _yangian_cubic(x, j, lam) -> OperatorSum:
    """[J(h),[J(x+),J(x-)]] - lam^2 (J(x-) x+ - x- J(x+)) h."""
    xp, xm, h = x[PLUS], x[MINUS], x[Z]
    jp, jm, jh = j[PLUS], j[MINUS], j[Z]
    lhs = commutator(jh, commutator(jp, jm))
    rhs = multiply(multiply(jm, xp) - multiply(xm, jp), h)
    return linear_combine([(1, lhs), (-(lam * lam), rhs)])


def check_yangian(e0: Dict[str, OperatorSum], e1: Dict[str, OperatorSum], lam,
                  edge_window: Optional[int] = None, tol: Optional[float] = None,
                  relation: str = 'yangian') -> RelationReport:
    """
    Defining relations of the Yangian for x = (E0^+, E0^-, E0^z) and
    J = (J(x+), J(x-), J(h)) given as dicts keyed '+', '-', 'z'.
    """
    residuals = _linear_sl2_residuals(e0)
    residuals.update(_level_one_residuals(e0, e1, 'J'))
    residuals['cubic'] = _yangian_cubic(e0, e1, lam)
    details = {name: classify(r, edge_window, tol) for name, r in residuals.items()}
    report = _combine(relation, e0[Z].field, details)
    logger.info(f"[CHECK] {relation}: {report.status}")
    return report


def check_relations_readings(e0: Dict[str, OperatorSum], e1: Dict[str, OperatorSum], lam,
                             edge_window: Optional[int] = None, tol: Optional[float] = None) -> Dict[str, RelationReport]:
    """
    Yangian relations under three readings of the J(h) image:
    'literal' (E0^z), 'plus' (+E1^z) and 'minus' (-E1^z). J(x^+-) = E1^+-.
    """
    readings = {
        'literal': e0[Z],
        'plus': e1[Z],
        'minus': -e1[Z],
    }
    out = {}
    for name, jh in readings.items():
        j = {PLUS: e1[PLUS], MINUS: e1[MINUS], Z: jh}
        out[name] = check_yangian(e0, j, lam, edge_window, tol, relation=f'yangian[{name}]')
    return out


def check_twisted_plus(k_op: OperatorSum, b_plus: OperatorSum, b_minus: OperatorSum, lam, c,
                       edge_window: Optional[int] = None, tol: Optional[float] = None,
                       relation: str = 'twisted-plus') -> RelationReport:
    """
    [k, B(x+-)] = +-2 B(x+-) and
    [B+-, [B+-, [B-+, B+-]]] = +-12 lam^2 B+- (k + c) B+-.
    """
    shifted = k_op + identity(k_op.chain, k_op.field, c)
    residuals = {
        '[k,B+]=2B+': linear_combine([(1, commutator(k_op, b_plus)), (-2, b_plus)]),
        '[k,B-]=-2B-': linear_combine([(1, commutator(k_op, b_minus)), (2, b_minus)]),
    }
    for name, sign, b, other in (('+', 1, b_plus, b_minus), ('-', -1, b_minus, b_plus)):
        lhs = commutator(b, commutator(b, commutator(other, b)))
        rhs = product(b, shifted, b)
        residuals[f'quartic{name}'] = linear_combine([(1, lhs), (-12 * sign * lam * lam, rhs)])
    details = {name: classify(r, edge_window, tol) for name, r in residuals.items()}
    report = _combine(relation, k_op.field, details)
    logger.info(f"[CHECK] {relation} (c={c}): {report.status}")
    return report


def symmetrizer(x1: OperatorSum, x2: OperatorSum, x3: OperatorSum) -> OperatorSum:
    """{x1, x2, x3} = 1/6 sum over the six orderings."""
    ops = (x1, x2, x3)
    total = linear_combine([(1, product(*(ops[n] for n in perm))) for perm in permutations(range(3))])
    return linear_combine([(_sixth(x1.field), total)])


def _sixth(field: str):
    return Fraction(1, 6) if field == EXACT else 1.0 / 6.0


def check_twisted_minus(x_ops: Dict[str, OperatorSum], g_ops: Dict[str, OperatorSum], lam,
                        edge_window: Optional[int] = None, tol: Optional[float] = None,
                        relation: str = 'twisted-minus') -> RelationReport:
    """
    sl2 relations, [G(h), x+-] = [h, G(x+-)] = +-2 G(x+-), [G(x+-), x-+] = +-G(h) and
    [G(h),[G(x+),G(x-)]] = 4 lam^2 ({x+, G(x-), G(h)} - {x-, G(x+), G(h)}).
    """
    residuals = _linear_sl2_residuals(x_ops)
    residuals.update(_level_one_residuals(x_ops, g_ops, 'G'))
    gp, gm, gh = g_ops[PLUS], g_ops[MINUS], g_ops[Z]
    lhs = commutator(gh, commutator(gp, gm))
    rhs = symmetrizer(x_ops[PLUS], gm, gh) - symmetrizer(x_ops[MINUS], gp, gh)
    residuals['cubic'] = linear_combine([(1, lhs), (-4 * lam * lam, rhs)])
    details = {name: classify(r, edge_window, tol) for name, r in residuals.items()}
    report = _combine(relation, gh.field, details)
    logger.info(f"[CHECK] {relation}: {report.status}")
    return report


def check_diagonal(a0: Dict[str, OperatorSum], y: Dict[str, OperatorSum], lam,
                   edge_window: Optional[int] = None, tol: Optional[float] = None,
                   relation: str = 'diagonal') -> RelationReport:
    """Relations of the diagonal twisted Yangian with x = (A0)^-, D = Y."""
    residuals = _linear_sl2_residuals(a0)
    residuals.update(_level_one_residuals(a0, y, 'D'))
    residuals['cubic'] = _yangian_cubic(a0, y, lam)
    details = {name: classify(r, edge_window, tol) for name, r in residuals.items()}
    report = _combine(relation, a0[Z].field, details)
    logger.info(f"[CHECK] {relation}: {report.status}")
    return report


# ============================================================================
# FOLDING-CONSTANT SEARCH
# ============================================================================

SEARCH_XXX = 'xxx_magnetic'
SEARCH_INO = 'ino_magnetic'
SEARCH_MODELS = (SEARCH_XXX, SEARCH_INO)
_MIRROR = {('z', '+'): ('+', 'z'), ('+', 'z'): ('z', '+'), ('z', '-'): ('-', 'z'), ('-', 'z'): ('z', '-')}


def _candidate(base: FoldingConstants, free: Sequence[Tuple[str, str]], values: Sequence[float]) -> Optional[FoldingConstants]:
    """
    Apply free entries; k^{+-z} mirrors k^{z+-}. When k^{+-} or k^{-+} is free and
    k^{z+-} is not, the latter follow k^{z+-} = -+4 / (k^{+-} - k^{-+}).
    """
    overrides = {}
    for key, v in zip(free, values):
        overrides[key] = v
        if key in _MIRROR and _MIRROR[key] not in free:
            overrides[_MIRROR[key]] = v
    cand = base.updated(overrides, name='candidate')
    if any(k in free for k in (('+', '-'), ('-', '+'))) and not any(k in free for k in _MIRROR):
        gap = complex(cand.k('+', '-')).real - complex(cand.k('-', '+')).real
        if abs(gap) < 1e-12:
            return None
        kz = -4.0 / gap
        cand = cand.updated({('z', '+'): kz, ('+', 'z'): kz, ('z', '-'): -kz, ('-', 'z'): -kz}, name='candidate')
    return cand


def _interior_norm(residual: OperatorSum, edge_window: int) -> float:
    _, interior = edge_partition(residual, edge_window)
    coeffs = np.array([complex(c) for c in without_constant(interior).terms.values()], dtype=complex)
    return float(np.linalg.norm(coeffs)) if coeffs.size else 0.0


def search_folding_constants(model: str, chain: ChainSpec, params, free: Sequence, edge_window: Optional[int] = None,
                             bounds: Tuple[float, float] = (-3.0, 3.0), coarse_step: Optional[float] = None,
                             fine_step: Optional[float] = None) -> pd.DataFrame:
    """
    Grid search over the free folding-constant entries.

    Objective: norm of the interior (non-constant) part of
    [fold(H), fold(E1^+)] for the model's bulk H and level-1 operator.
    A coarse grid over `bounds` is refined around its best point. Returns a
    DataFrame with one column per free entry plus 'residual', best first.
    """
    from spinfold.model_inozemtsev import InoParams, build_e1_kappa, build_h_kappa
    from spinfold.model_xxx import XxxParams, build_e1, build_h_xxx

    free = [parse_key(k) if isinstance(k, str) else tuple(k) for k in free]
    if not free:
        raise ParameterError("search_folding_constants needs at least one free entry")
    if model not in SEARCH_MODELS:
        raise ParameterError(f"model must be one of {SEARCH_MODELS}, got {model!r}")
    full = chain.full()
    w = config.EDGE_WINDOW if edge_window is None else edge_window
    if model == SEARCH_XXX:
        p = XxxParams(float(params.lam), float(params.mu), FLOAT)
        base = preset_constants(FoldPreset(XXX_MAGNETIC, lam=p.lam, mu=p.mu))
        h, e = build_h_xxx(full, p), build_e1(full, p, PLUS)
    else:
        p = params if isinstance(params, InoParams) else InoParams(params.lam, 1.0, params.mu)
        base = preset_constants(FoldPreset(INO_MAGNETIC, sign=1))
        h, e = build_h_kappa(full, p), build_e1_kappa(full, p, PLUS)

    cache: Dict[Tuple[float, ...], float] = {}

    def objective(values: Tuple[float, ...]) -> float:
        key = tuple(round(v, 10) for v in values)
        if key not in cache:
            cand = _candidate(base, free, key)
            cache[key] = np.inf if cand is None else _interior_norm(commutator(fold(h, cand), fold(e, cand)), w)
        return cache[key]

    dims = len(free)
    coarse = coarse_step or (0.25 if dims == 1 else 0.5)
    fine = fine_step or (0.01 if dims == 1 else 0.05)
    lo, hi = bounds
    axis = np.round(np.arange(lo, hi + coarse / 2, coarse), 10)
    best = min(grid_product(axis, repeat=dims), key=objective)
    local = [np.round(np.arange(b - coarse, b + coarse + fine / 2, fine), 10) for b in best]
    for point in grid_product(*local):
        objective(point)

    rows = [dict(zip([f"{a}{b}" for a, b in free], key), residual=value) for key, value in cache.items()]
    table = pd.DataFrame(rows).sort_values(['residual'] + [f"{a}{b}" for a, b in free]).reset_index(drop=True)
    top = table.iloc[0]
    logger.info(f"[SEARCH] {model} free={[f'{a}{b}' for a, b in free]}: best {dict(top)} "
                f"({len(table)} evaluations)")
    return table


# ============================================================================
# SUITE RUNNER
# ============================================================================

@dataclass
class CheckResult:
    """One row of a suite report."""
    check: str
    status: str
    expected: str = EXPECT_PASS
    max_interior: float = 0.0
    constant: object = None
    witness: Optional[str] = None
    params: Dict = dc_field(default_factory=dict)
    elapsed_ms: int = 0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        if self.error:
            return False
        failed = self.status == FAIL
        return failed if self.expected == EXPECT_FAIL else not failed

    def to_dict(self) -> Dict:
        max_interior = '0' if self.status == EXACT_ZERO and not self.max_interior else self.max_interior
        out = {
            'check': self.check,
            'status': self.status,
            'max_interior': max_interior,
            'constant': to_jsonable(self.constant),
            'witness': self.witness,
            'params': self.params,
            'elapsed_ms': self.elapsed_ms,
            'expected': self.expected,
        }
        if self.error:
            out['error'] = self.error
        return out


@dataclass
class Check:
    """Named, deferred check; `run` returns a RelationReport or ResidualReport."""
    check_id: str
    run: Callable[[], object]
    expected: str = EXPECT_PASS
    params: Dict = dc_field(default_factory=dict)


def _execute(check: Check) -> CheckResult:
    start = time.perf_counter()
    try:
        report = check.run()
    except ValueError as e:
        logger.error(f"[SUITE] {check.check_id} raised {type(e).__name__}: {e}")
        return CheckResult(check.check_id, FAIL, check.expected, params=check.params,
                           elapsed_ms=int((time.perf_counter() - start) * 1000), error=str(e))
    elapsed = int((time.perf_counter() - start) * 1000)
    if isinstance(report, ResidualReport):
        result = CheckResult(check.check_id, report.status, check.expected, report.max_interior_coeff,
                             report.constant, report.witness, check.params, elapsed)
    else:
        result = CheckResult(check.check_id, report.status, check.expected, report.max_residual,
                             report.constant, report.witness, check.params, elapsed)
    tag = 'OK' if result.ok else 'UNEXPECTED'
    logger.info(f"[SUITE] {check.check_id}: {result.status} (expected {check.expected}) {tag} in {elapsed} ms")
    return result


def run_checks(checks: Sequence[Check], threads: Optional[int] = None) -> List[CheckResult]:
    """Run checks on a thread pool; results are ordered by check id."""
    workers = max(1, config.THREADS if threads is None else threads)
    if workers == 1:
        results = [_execute(c) for c in checks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_execute, checks))
    return sorted(results, key=lambda r: r.check)


def run_suite(name: str, cfg, threads: Optional[int] = None) -> List[CheckResult]:
    """Build the named suite from suites.SUITES and run it."""
    from spinfold import suites
    if name not in suites.SUITES:
        raise ParameterError(f"Unknown suite '{name}' (available: {sorted(suites.SUITES)})")
    checks = suites.SUITES[name](cfg)
    logger.info(f"[SUITE] {name}: {len(checks)} checks")
    return run_checks(checks, threads)
