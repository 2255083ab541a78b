"""
Named check suites

Each suite is a function cfg -> list[Check]. `cfg` needs the RunConfig
attributes L, lam, mu, kappa, field, seed, edge_window, tol_identity and
tol_edge (the last three may be None for config defaults).

Expected outcomes:
    pass    - status must not be Fail
    fail    - negative control, status must be Fail
    report  - printed for inspection, never affects the exit code (no built-in
              suite uses it)
"""

import logging
import math
from typing import Callable, Dict, List, Optional

import numpy as np

from spinfold import config
from spinfold.errors import ParameterError
from spinfold.folding import ALL_ONES, FoldPreset, XXX_MAGNETIC, fold, fold_double, preset_constants
from spinfold.matrix_oracle import oracle_sweep, to_matrix
from spinfold.model_double_row import (
    KIND_INO, KIND_XXX, build_ab, build_h_delta, build_h_double, build_y,
)
from spinfold.model_inozemtsev import (
    InoParams, build_e1_kappa, build_e2_kappa, build_g_kappa, build_h_kappa, build_h_lo,
    build_h_mu_kappa, build_h_open_kappa, build_m_mu, build_x_candidate, build_x_kappa,
    h_kappa_constant_closed_form, magnetic_constants,
)
from spinfold.model_xxx import (
    DOUBLEPRIME, FULL, PRIME, XxxParams, build_e0, build_e1, build_e2, build_g, build_h_magnetic,
    build_h_open, build_h_xxx, build_x, fold_e1z_closed_form, fold_h_constant,
)
from spinfold.pauli_algebra import (
    FULL_LINE, GENERATORS, HALF_LINE, MINUS, PLUS, Z, ChainSpec, OperatorSum, max_coefficient, scale,
    site_op, theta, to_field,
)
from spinfold.scalars import FLOAT, format_scalar, magnitude, parse_param
from spinfold.verify import (
    EXACT_ZERO, EXPECT_FAIL, EXPECT_PASS, FAIL, SEARCH_INO, SEARCH_XXX, Check, RelationParams,
    RelationReport, check_diagonal, check_fold_identity, check_relations_readings, check_symmetry,
    check_twisted_minus, check_twisted_plus, check_yangian, search_folding_constants,
)

logger = logging.getLogger(__name__)


# ============================================================================
# HELPERS
# ============================================================================

def _xxx(cfg) -> XxxParams:
    return XxxParams(cfg.lam, cfg.mu if cfg.mu is not None else 0, cfg.field)


def _ino(cfg, mu=None, kappa=None) -> InoParams:
    mu = cfg.mu if mu is None else mu
    return InoParams(parse_param(cfg.lam, FLOAT), cfg.kappa if kappa is None else kappa,
                     parse_param(mu, FLOAT) if mu is not None else 0.0)


def _window(cfg) -> int:
    return config.EDGE_WINDOW if cfg.edge_window is None else cfg.edge_window


def _tol_identity(cfg) -> float:
    return config.TOL_IDENTITY if cfg.tol_identity is None else cfg.tol_identity


def _ino_envelope(cfg, p: InoParams, L: int):
    """
    Interior = sites >= -ceil(L/2). Tolerance 10 max(1,|lam|)^3 p(d) with
    d = L - ceil(L/2) the distance from the interior to the free end,
    floored at TOL_EDGE, unless overridden.
    """
    window = max(L - math.ceil(L / 2) - 1, 0)
    if cfg.tol_edge is not None:
        return window, cfg.tol_edge
    d = max(L - math.ceil(L / 2), 1)
    tol = 10.0 * max(1.0, abs(p.lam)) ** 3 * p.kernels().p(d)
    return window, max(tol, config.TOL_EDGE)


def _constant_check(lhs: OperatorSum, rhs: OperatorSum, expected, tol: float, relation: str) -> RelationReport:
    """lhs - rhs must equal expected * identity."""
    report = check_fold_identity(lhs, rhs, allow_constant=True, tol=tol, relation=relation)
    if report.status == FAIL:
        return report
    got = report.constant if report.constant is not None else 0
    if magnitude(complex(got) - complex(expected)) > (tol if lhs.field == FLOAT else 0.0):
        report.status = FAIL
        report.witness = f"constant {format_scalar(got)} != expected {format_scalar(expected)}"
    return report


def _matches(a: OperatorSum, b: OperatorSum, tol: float, relation: str) -> RelationReport:
    """Coefficientwise agreement of operators built in different fields."""
    return check_fold_identity(to_field(a, FLOAT), to_field(b, FLOAT), tol=tol, relation=relation)


def _numeric(value: float, tol: float, relation: str, witness: Optional[str] = None) -> RelationReport:
    status = EXACT_ZERO if value <= tol else FAIL
    return RelationReport(relation, status, value, FLOAT, witness=None if status != FAIL else witness)


def _hermiticity(op: OperatorSum, relation: str) -> RelationReport:
    m = to_matrix(op).matrix
    return _numeric(float(np.max(np.abs(m - m.conj().T))), config.TOL_ORACLE, relation, 'matrix not hermitian')


def _triple(build: Callable[[str], OperatorSum]) -> Dict[str, OperatorSum]:
    return {a: build(a) for a in GENERATORS}


# ============================================================================
# XXX SUITES
# ============================================================================

def xxx_bulk(cfg) -> List[Check]:
    p, w = _xxx(cfg), _window(cfg)
    full = ChainSpec(cfg.L, FULL_LINE)
    h = lambda: build_h_xxx(full, p)
    params = {'L': cfg.L, **p.to_dict()}
    checks = [Check(f'xxx-bulk/[H,E0{a}]', lambda a=a: check_symmetry(h(), build_e0(full, a, p.field), w),
                    params=params) for a in GENERATORS]
    for variant, tag in ((FULL, ''), (PRIME, "'"), (DOUBLEPRIME, "''")):
        for a in GENERATORS:
            checks.append(Check(f'xxx-bulk/[H,E1{a}{tag}]',
                                lambda a=a, v=variant: check_symmetry(h(), build_e1(full, p, a, v), w),
                                params=params))
    checks.append(Check('xxx-bulk/hermitian-H', lambda: _hermiticity(build_h_xxx(ChainSpec(2), p), 'hermitian-H'),
                        params=params))
    return checks


def xxx_magnetic(cfg) -> List[Check]:
    p, w = _xxx(cfg), _window(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    k = preset_constants(FoldPreset(XXX_MAGNETIC, lam=p.lam, mu=p.mu))
    tol = _tol_identity(cfg)
    params = {'L': cfg.L, **p.to_dict(), 'constants': k.name}
    checks = [
        Check('xxx-magnetic/fold-H',
              lambda: _constant_check(fold(build_h_xxx(full, p), k), scale(build_h_magnetic(half, p), 2),
                                      fold_h_constant(p, k), tol, 'fold-H'), params=params),
        Check('xxx-magnetic/fold-E1z',
              lambda: check_fold_identity(fold(build_e1(full, p, Z), k), fold_e1z_closed_form(half, p, k),
                                          tol=tol, relation='fold-E1z'), params=params),
        Check('xxx-magnetic/[Hmu,E0z]',
              lambda: check_symmetry(build_h_magnetic(half, p), build_e0(half, Z, p.field), w), params=params),
    ]
    for variant, tag in ((FULL, ''), (PRIME, "'"), (DOUBLEPRIME, "''")):
        for a in (PLUS, MINUS):
            checks.append(Check(
                f'xxx-magnetic/fold-E1{a}{tag}',
                lambda a=a, v=variant: check_fold_identity(fold(build_e1(full, p, a, v), k),
                                                           scale(build_x(half, p, a, v), 2), tol=tol,
                                                           relation='fold-E1'),
                params=params))
    for a in (PLUS, MINUS):
        checks.append(Check(f'xxx-magnetic/[Hmu,X{a}]',
                            lambda a=a: check_symmetry(build_h_magnetic(half, p), build_x(half, p, a), w),
                            params=params))
    # naive truncation of E1 does not survive the boundary
    checks.append(Check('xxx-magnetic/[Hmu,E1+ truncated]',
                        lambda: check_symmetry(build_h_magnetic(half, p), build_e1(half, p, PLUS), w),
                        expected=EXPECT_FAIL, params=params))
    return checks


def xxx_open(cfg) -> List[Check]:
    p, w = _xxx(cfg), _window(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    ones = preset_constants(FoldPreset(ALL_ONES))
    tol = _tol_identity(cfg)
    params = {'L': cfg.L, **p.to_dict(), 'constants': ones.name}
    three_halves = -3 * p.lam / 2
    checks = [
        Check('xxx-open/fold-H',
              lambda: _constant_check(fold(build_h_xxx(full, p), ones), scale(build_h_open(half, p), 2),
                                      three_halves, tol, 'fold-H'), params=params),
    ]
    for a in GENERATORS:
        checks.append(Check(f'xxx-open/fold-E0{a}',
                            lambda a=a: check_fold_identity(fold(build_e0(full, a, p.field), ones),
                                                            scale(build_e0(half, a, p.field), 2), tol=tol),
                            params=params))
        # E1^z folds with the opposite sign, matching J(h) -> -E1^z
        sign = p.lam if a == Z else -p.lam
        checks.append(Check(f'xxx-open/fold-E1{a}',
                            lambda a=a, s=sign: check_fold_identity(fold(build_e1(full, p, a), ones),
                                                                    scale(build_e0(half, a, p.field), s), tol=tol),
                            params=params))
        checks.append(Check(f'xxx-open/fold-E2t{a}',
                            lambda a=a: check_fold_identity(fold(build_e2(full, p, a, tilde=True), ones),
                                                            scale(build_g(half, p, a), parse_param('8/3', p.field)),
                                                            tol=tol, relation='fold-E2t'),
                            params=params))
        checks.append(Check(f'xxx-open/[H0,G{a}]',
                            lambda a=a: check_symmetry(build_h_open(half, p), build_g(half, p, a), w),
                            params=params))
    return checks


def xxx_relations(cfg) -> List[Check]:
    p, w = _xxx(cfg), _window(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    params = {'L': cfg.L, **p.to_dict()}
    # negative controls need three interior sites to leave the edge window
    control = ChainSpec(max(cfg.L, w + 3), HALF_LINE)
    control_params = {**params, 'L': control.L}

    def readings(name):
        e0 = _triple(lambda a: build_e0(full, a, p.field))
        e1 = _triple(lambda a: build_e1(full, p, a))
        return check_relations_readings(e0, e1, p.lam, w)[name]

    def rescaled():
        e0 = _triple(lambda a: build_e0(full, a, p.field))
        e1 = _triple(lambda a: build_e1(full, p, a))
        e1[Z] = -e1[Z]
        return check_yangian(e0, e1, 2 * p.lam, w, relation='yangian[2 lambda]')

    checks = [
        Check('xxx-relations/yangian[minus]', lambda: readings('minus'), params=params),
        Check('xxx-relations/yangian[literal]', lambda: readings('literal'), expected=EXPECT_FAIL, params=params),
        Check('xxx-relations/yangian[plus]', lambda: readings('plus'), expected=EXPECT_FAIL, params=params),
        Check('xxx-relations/yangian[2 lambda]', rescaled, expected=EXPECT_FAIL, params=params),
    ]
    if p.mu != 0:
        rel = RelationParams.from_mu(p.lam, p.mu)

        def twisted(c, chain=half):
            return check_twisted_plus(build_e0(chain, Z, p.field), build_x(chain, p, PLUS), build_x(chain, p, MINUS),
                                      p.lam, c, w)

        checks += [
            Check('xxx-relations/twisted-plus[c=-lam/2mu]', lambda: twisted(rel.c), params=params),
            Check('xxx-relations/twisted-plus[c=-lam/mu]', lambda: twisted(-p.lam / p.mu, control),
                  expected=EXPECT_FAIL, params=control_params),
            Check('xxx-relations/twisted-plus[c=0]', lambda: twisted(0, control), expected=EXPECT_FAIL,
                  params=control_params),
        ]

    def twisted_minus(level2, chain):
        x = _triple(lambda a: build_e0(chain, a, p.field))
        g = _triple(lambda a: build_g(chain, p, a) if level2 == 'G' else build_e2(chain, p, a))
        return check_twisted_minus(x, g, p.lam, w, relation=f'twisted-minus[{level2}]')

    checks += [
        Check('xxx-relations/twisted-minus[G]', lambda: twisted_minus('G', half), params=params),
        Check('xxx-relations/twisted-minus[E2]', lambda: twisted_minus('E2', control), expected=EXPECT_FAIL,
              params=control_params),
    ]
    return checks


def double_xxx(cfg) -> List[Check]:
    p, w = _xxx(cfg), _window(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE, rows=2), ChainSpec(cfg.L, HALF_LINE, rows=2)
    return _double_checks('double-xxx', p, KIND_XXX, full, half, w, _tol_identity(cfg), w)


def _double_checks(prefix: str, p, kind: str, full: ChainSpec, half: ChainSpec, w: int, tol: float,
                   sym_window: int, sym_tol: Optional[float] = None) -> List[Check]:
    ones = preset_constants(FoldPreset(ALL_ONES))
    params = {'L': full.L, **p.to_dict(), 'constants': ones.name}
    checks = [
        Check(f'{prefix}/fold-Hoo',
              lambda: check_fold_identity(fold_double(build_h_double(full, p, kind), ones),
                                          scale(build_h_delta(half, p, kind), 2), tol=tol, relation='fold-Hoo'),
              params=params),
    ]
    for a in GENERATORS:
        # the xxx Y^z is minus half of the folded B1^z
        y_scale = -2 if kind == KIND_XXX and a == Z else 2
        checks += [
            Check(f'{prefix}/fold-A0{a}',
                  lambda a=a: check_fold_identity(fold_double(build_ab(full, p, a, 0, 'A', kind), ones),
                                                  scale(build_ab(half, p, a, 0, 'A', kind), 2), tol=tol),
                  params=params),
            Check(f'{prefix}/fold-B0{a}',
                  lambda a=a: check_fold_identity(fold_double(build_ab(full, p, a, 0, 'B', kind), ones),
                                                  scale(build_ab(half, p, a, 0, 'B', kind), 0), tol=tol),
                  params=params),
            Check(f'{prefix}/fold-A1{a}',
                  lambda a=a: check_fold_identity(fold_double(build_ab(full, p, a, 1, 'A', kind), ones),
                                                  scale(build_ab(half, p, a, 0, 'A', kind), 0), tol=tol),
                  params=params),
            Check(f'{prefix}/fold-B1{a}',
                  lambda a=a, s=y_scale: check_fold_identity(fold_double(build_ab(full, p, a, 1, 'B', kind), ones),
                                                         scale(build_y(half, p, a, kind), s), tol=tol,
                                                         relation='fold-B1'),
                  params=params),
            Check(f'{prefix}/[Hdelta,Y{a}]',
                  lambda a=a: check_symmetry(build_h_delta(half, p, kind), build_y(half, p, a, kind),
                                             sym_window, sym_tol),
                  params=params),
        ]

    def diagonal(sign, chain):
        a0 = _triple(lambda a: build_ab(chain, p, a, 0, 'A', kind))
        y = _triple(lambda a: build_y(chain, p, a, kind))
        y[Z] = scale(y[Z], sign)
        return check_diagonal(a0, y, p.lam, sym_window, sym_tol, relation=f"diagonal[{'+' if sign > 0 else '-'}Yz]")

    control = ChainSpec(max(half.L, sym_window + 3), HALF_LINE, rows=2)
    checks += [
        Check(f'{prefix}/diagonal[+Yz]', lambda: diagonal(1, half), params=params),
        Check(f'{prefix}/diagonal[-Yz]', lambda: diagonal(-1, control), expected=EXPECT_FAIL,
              params={**params, 'L': control.L}),
    ]
    return checks


# ============================================================================
# LONG-RANGE SUITES
# ============================================================================

def ino_magnetic(cfg) -> List[Check]:
    p = _ino(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    window, env_tol = _ino_envelope(cfg, p, cfg.L)
    tol = _tol_identity(cfg)
    params = {'L': cfg.L, **p.to_dict()}
    integrable = math.isclose(abs(p.mu), abs(p.lam), rel_tol=1e-12)
    k = magnetic_constants(p)

    checks = [
        Check('ino-magnetic/fold-Hk',
              lambda: _constant_check(fold(build_h_kappa(full, p), k), scale(build_h_mu_kappa(half, p), 2),
                                      h_kappa_constant_closed_form(full, p, k), tol, 'fold-Hk'), params=params),
        Check('ino-magnetic/[Hkmu,E0z]',
              lambda: check_symmetry(build_h_mu_kappa(half, p), build_e0(half, Z, FLOAT), window, tol),
              params=params),
        Check('ino-magnetic/[Hkmu,fold-Ek1z]',
              lambda: check_symmetry(build_h_mu_kappa(half, p), fold(build_e1_kappa(full, p, Z), k), window, tol),
              params=params),
        Check('ino-magnetic/hermitian-Hkmu',
              lambda: _hermiticity(build_h_mu_kappa(ChainSpec(3, HALF_LINE), p), 'hermitian-Hkmu'),
              params=params),
    ]
    for a in (PLUS, MINUS):
        checks.append(Check(f'ino-magnetic/fold-Ek1{a}',
                            lambda a=a: check_fold_identity(fold(build_e1_kappa(full, p, a), k),
                                                            scale(build_x_candidate(half, p, a), 2), tol=tol),
                            params=params))
    if integrable:
        for a in (PLUS, MINUS):
            checks.append(Check(f'ino-magnetic/[Hkmu,Xk{a}]',
                                lambda a=a: check_symmetry(build_h_mu_kappa(half, p), build_x_kappa(half, p, a),
                                                           window, env_tol),
                                params=params))
        checks.append(Check('ino-magnetic/theta-Xk',
                            lambda: _matches(theta(build_x_kappa(half, p, PLUS)),
                                             build_x_kappa(half, InoParams(p.lam, p.kappa, -p.mu), MINUS),
                                             tol, 'theta-Xk'), params=params))
        rel = RelationParams.from_mu(p.lam, p.mu)
        checks.append(Check('ino-magnetic/twisted-plus',
                            lambda: check_twisted_plus(build_e0(half, Z, FLOAT), build_x_kappa(half, p, PLUS),
                                                       build_x_kappa(half, p, MINUS), p.lam, rel.c, window, env_tol),
                            params=params))
    control = p if not integrable else InoParams(p.lam, p.kappa, 0.6 * p.lam)
    checks.append(Check('ino-magnetic/negative-control',
                        lambda: check_symmetry(build_h_mu_kappa(half, control), build_x_candidate(half, control, PLUS),
                                               window, 1e-2),
                        expected=EXPECT_FAIL, params={'L': cfg.L, **control.to_dict()}))
    return checks


def ino_open(cfg) -> List[Check]:
    p = _ino(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    window, env_tol = _ino_envelope(cfg, p, cfg.L)
    tol = _tol_identity(cfg)
    ones = preset_constants(FoldPreset(ALL_ONES))
    params = {'L': cfg.L, **p.to_dict(), 'constants': ones.name}
    kern = p.kernels()
    boundary = -1.5 * p.lam * sum(kern.p(2 * i - 1) for i in half.indices())
    checks = [
        Check('ino-open/fold-Hk',
              lambda: _constant_check(fold(build_h_kappa(full, p), ones), scale(build_h_open_kappa(half, p), 2),
                                      boundary, tol, 'fold-Hk'), params=params),
    ]
    for a in GENERATORS:
        checks.append(Check(f'ino-open/Gk{a}-direct-vs-fold',
                            lambda a=a: check_fold_identity(build_g_kappa(half, p, a),
                                                            scale(fold(build_e2_kappa(full, p, a, tilde=True), ones),
                                                                  0.375), tol=tol),
                            params=params))
        checks.append(Check(f'ino-open/[Hk0,Gk{a}]',
                            lambda a=a: check_symmetry(build_h_open_kappa(half, p), build_g_kappa(half, p, a),
                                                       window, env_tol),
                            params=params))
    return checks


def ino_limits(cfg) -> List[Check]:
    """kappa -> infinity: long-range operators approach their nearest-neighbour forms."""
    kappa = 20.0
    p = _ino(cfg, mu=cfg.lam, kappa=kappa)
    px = XxxParams(cfg.lam, cfg.lam, FLOAT)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    half2 = ChainSpec(cfg.L, HALF_LINE, rows=2)
    tol = 1e-8
    params = {'L': cfg.L, **p.to_dict()}
    checks = [
        Check('ino-limits/Hk', lambda: _matches(build_h_kappa(full, p), build_h_xxx(full, px), tol, 'Hk'),
              params=params),
        Check('ino-limits/Hklo', lambda: _numeric(max_coefficient(build_h_lo(half, p)), 1e-12, 'Hklo'), params=params),
        Check('ino-limits/Mkmu', lambda: _matches(build_m_mu(half, p), site_op(half, FLOAT, Z, 0, coeff=p.mu),
                                                  tol, 'Mkmu'), params=params),
    ]
    for a in GENERATORS:
        s = -1 if a == Z else 1
        checks.append(Check(f'ino-limits/Ek1{a}',
                            lambda a=a, s=s: _matches(build_e1_kappa(full, p, a), scale(build_e1(full, px, a), s),
                                                      tol, 'Ek1'), params=params))
        checks.append(Check(f'ino-limits/Yk{a}',
                            lambda a=a: _matches(build_y(half2, p, a, KIND_INO), build_y(half2, px, a, KIND_XXX),
                                                 tol, 'Yk'),
                            params=params))
        checks.append(Check(f'ino-limits/Gk{a}',
                            lambda a=a: _matches(build_g_kappa(half, p, a), build_g(half, px, a), tol, 'Gk'),
                            params=params))
    for a in (PLUS, MINUS):
        checks.append(Check(f'ino-limits/Xk{a}',
                            lambda a=a: _matches(build_x_kappa(half, p, a), build_x(half, px, a), tol, 'Xk'),
                            params=params))
    return checks


def double_ino(cfg) -> List[Check]:
    p = _ino(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE, rows=2), ChainSpec(cfg.L, HALF_LINE, rows=2)
    window, env_tol = _ino_envelope(cfg, p, cfg.L)
    return _double_checks('double-ino', p, KIND_INO, full, half, window, _tol_identity(cfg), window,
                          env_tol)


# ============================================================================
# ORACLE AND SEARCH
# ============================================================================

def oracle(cfg) -> List[Check]:
    seed = cfg.seed
    tol = config.TOL_ORACLE
    single = ChainSpec(3, FULL_LINE)
    double = ChainSpec(2, FULL_LINE, rows=2)
    p = _xxx(cfg)
    return [
        Check('oracle/single-row', lambda: _numeric(oracle_sweep(single, 200, seed), tol, 'oracle-single'),
              params={'chain': single.to_dict(), 'seed': seed, 'pairs': 200}),
        Check('oracle/two-row', lambda: _numeric(oracle_sweep(double, 50, seed + 1000), tol, 'oracle-double'),
              params={'chain': double.to_dict(), 'seed': seed + 1000, 'pairs': 50}),
        Check('oracle/hermitian-Hdelta',
              lambda: _hermiticity(build_h_delta(ChainSpec(2, HALF_LINE, rows=2), p, KIND_XXX), 'hermitian-Hdelta'),
              params=p.to_dict()),
    ]


def search(cfg) -> List[Check]:
    # the ino minimizers only separate once the interior has more than one site
    L = max(cfg.L, 4)
    chain = ChainSpec(L, FULL_LINE)

    def xxx_case():
        table = search_folding_constants(SEARCH_XXX, chain, XxxParams(1, 1, FLOAT), ['z+'])
        best = float(table.iloc[0]['z+'])
        return _numeric(abs(best - 1.0), 1e-2 + 1e-9, 'search-xxx', witness=f"best k^(z+) = {best}")

    def ino_case():
        kappa = cfg.kappa if cfg.kappa is not None else config.DEFAULT_KAPPA
        table = search_folding_constants(SEARCH_INO, chain, InoParams(1.0, kappa, 1.0), ['+-', '-+'])
        at = table[(table['+-'] == 2.0) & (table['-+'] == -2.0)]['residual']
        best = float(table.iloc[0]['residual'])
        gap = float(at.iloc[0]) - best if len(at) else float('inf')
        return _numeric(gap, 1e-6, 'search-ino', witness=f"best {dict(table.iloc[0])}")

    return [
        Check('search/xxx-kz+', xxx_case, params={'L': L, 'lambda': 1, 'mu': 1}),
        Check('search/ino-k+-', ino_case, params={'L': L, 'lambda': 1, 'mu': 1}),
    ]


SUITES: Dict[str, Callable] = {
    'xxx-bulk': xxx_bulk,
    'xxx-magnetic': xxx_magnetic,
    'xxx-open': xxx_open,
    'xxx-relations': xxx_relations,
    'double-xxx': double_xxx,
    'ino-magnetic': ino_magnetic,
    'ino-open': ino_open,
    'ino-limits': ino_limits,
    'double-ino': double_ino,
    'oracle': oracle,
    'search': search,
}

# Suites that need kappa
LONG_RANGE_SUITES = ('ino-magnetic', 'ino-open', 'ino-limits', 'double-ino')

DEFAULT_SUITE = {
    ('xxx', 'bulk'): 'xxx-bulk',
    ('xxx', 'magnetic'): 'xxx-magnetic',
    ('xxx', 'open'): 'xxx-open',
    ('double-xxx', 'diagonal'): 'double-xxx',
    ('ino', 'bulk'): 'ino-limits',
    ('ino', 'magnetic'): 'ino-magnetic',
    ('ino', 'open'): 'ino-open',
    ('double-ino', 'diagonal'): 'double-ino',
}


# ============================================================================
# RELATION SUITES (relations subcommand)
# ============================================================================

ALGEBRAS = ('yangian', 'twisted-plus', 'twisted-minus', 'diagonal')


def _ino_relations(algebra: str, cfg) -> List[Check]:
    p = _ino(cfg)
    full, half = ChainSpec(cfg.L, FULL_LINE), ChainSpec(cfg.L, HALF_LINE)
    window, env_tol = _ino_envelope(cfg, p, cfg.L)
    params = {'L': cfg.L, **p.to_dict()}
    if algebra == 'yangian':
        def reading(name):
            e0 = _triple(lambda a: build_e0(full, a, FLOAT))
            e1 = _triple(lambda a: build_e1_kappa(full, p, a))
            return check_relations_readings(e0, e1, p.lam, window, env_tol)[name]
        # E^z_{k,1} already tends to -E1^z, so the ino chain takes the 'plus' reading
        return [Check(f'ino-relations/yangian[{name}]', lambda name=name: reading(name),
                      expected=EXPECT_PASS if name == 'plus' else EXPECT_FAIL, params=params)
                for name in ('literal', 'plus', 'minus')]
    if algebra == 'twisted-plus':
        return [c for c in ino_magnetic(cfg) if 'twisted-plus' in c.check_id]
    x = lambda: _triple(lambda a: build_e0(half, a, FLOAT))
    g = lambda: _triple(lambda a: build_g_kappa(half, p, a))
    return [Check('ino-relations/twisted-minus[Gk]',
                  lambda: check_twisted_minus(x(), g(), p.lam, window, env_tol, relation='twisted-minus[Gk]'),
                  params=params)]


def relation_checks(algebra: str, cfg) -> List[Check]:
    """Checks behind `relations ALGEBRA` for the configured model."""
    if algebra not in ALGEBRAS:
        raise ParameterError(f"Algebra must be one of {ALGEBRAS}, got {algebra!r}")
    model = cfg.model
    if algebra == 'diagonal':
        if model == 'double-xxx':
            return [c for c in double_xxx(cfg) if '/diagonal' in c.check_id]
        if model == 'double-ino':
            return [c for c in double_ino(cfg) if '/diagonal' in c.check_id]
        raise ParameterError("diagonal relations need --model double-xxx or double-ino")
    if model == 'xxx':
        return [c for c in xxx_relations(cfg) if f'/{algebra}' in c.check_id]
    if model == 'ino':
        return _ino_relations(algebra, cfg)
    raise ParameterError(f"{algebra} relations need a single-row model, got {model!r}")
