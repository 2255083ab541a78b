"""
XXX Chain Operators

Builders for the nearest-neighbour Heisenberg chain:
- H_XXX and its half-line truncation H^-
- Lie operators E0^a and level-1 Yangian operators E1^a (with the primed
  and doubleprimed halves E1' and E1'')
- magnetic boundary: H^mu = H^- + mu sz_0 and the twisted symmetries X^a
- open boundary: H^0 = H^-, level-2 operators E2^a, E2~^a and G^a

Sign convention: generators are '+', '-', 'z'. All infinite sums are
truncated to the chain range. Operators are exact whenever XxxParams holds
rational couplings.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from spinfold.errors import GeometryError, ParameterError
from spinfold.folding import FoldingConstants
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, MINUS, PLUS, Z, GENERATORS,
    ChainSpec, OperatorSum, commutator, from_terms, identity, linear_combine, multiply, product,
    require_geometry, site_op,
)
from spinfold.scalars import EXACT, check_field, parse_param

logger = logging.getLogger(__name__)

FULL = 'full'
PRIME = 'prime'
DOUBLEPRIME = 'doubleprime'
VARIANTS = (FULL, PRIME, DOUBLEPRIME)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class XxxParams:
    """
    Couplings of the XXX chain.

    lam: nonzero hopping strength
    mu: boundary magnetic field (0 allowed; X^a needs mu != 0)
    field: scalar field of every operator built from these params
    """
    lam: object = 1
    mu: object = 0
    field: str = EXACT

    def __post_init__(self):
        check_field(self.field)
        object.__setattr__(self, 'lam', parse_param(self.lam, self.field))
        object.__setattr__(self, 'mu', parse_param(self.mu, self.field))
        if self.lam == 0:
            raise ParameterError("lambda must be nonzero")

    def to_dict(self) -> Dict:
        return {'lambda': str(self.lam), 'mu': str(self.mu), 'field': self.field}


def _check_generator(a: str):
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")


def _check_variant(variant: str):
    if variant not in VARIANTS:
        raise ParameterError(f"Variant must be one of {VARIANTS}, got {variant!r}")


def _rows(chain: ChainSpec, row: Optional[int]) -> Tuple[int, ...]:
    if row is None:
        return chain.row_ids()
    if row not in chain.row_ids():
        raise GeometryError(f"Row {row} not present in {chain.describe()}")
    return (row,)


# ============================================================================
# LIE OPERATORS AND HAMILTONIANS
# ============================================================================

def build_e0(chain: ChainSpec, a: str, field: str = EXACT, row: Optional[int] = None) -> OperatorSum:
    """sum_i sigma^a_i over the chain (all rows unless `row` is given)."""
    _check_generator(a)
    return from_terms(chain, field, [(1, [((r, i), a)]) for r in _rows(chain, row) for i in chain.indices()])


def _link_terms(lam, i_site, j_site, coeff_scale=1) -> List:
    c = -lam * coeff_scale
    return [
        (c, [(i_site, PLUS), (j_site, MINUS)]),
        (c, [(i_site, MINUS), (j_site, PLUS)]),
        (c * HALF, [(i_site, Z), (j_site, Z)]),
    ]


def build_h_xxx(chain: ChainSpec, p: XxxParams, row: Optional[int] = None) -> OperatorSum:
    """
    -lam sum_i (s+_i s-_{i+1} + s-_i s+_{i+1} + 1/2 sz_i sz_{i+1}) over in-range links.

    On the half line this is H^-.
    """
    idx = list(chain.indices())
    if len(idx) < 2:
        raise GeometryError(f"H_XXX needs at least two sites per row, got {chain.describe()}")
    terms = []
    for r in _rows(chain, row):
        for i in idx[:-1]:
            terms.extend(_link_terms(p.lam, (r, i), (r, i + 1)))
    return from_terms(chain, p.field, terms)


def build_h_magnetic(chain: ChainSpec, p: XxxParams) -> OperatorSum:
    """H^mu = H^- + mu sz_0."""
    require_geometry(chain, HALF_LINE, rows=1, what='H^mu')
    h = build_h_xxx(chain, p)
    if p.mu == 0:
        return h
    return h + site_op(chain, p.field, Z, 0, coeff=p.mu)


def build_h_open(chain: ChainSpec, p: XxxParams) -> OperatorSum:
    """H^0: the half-line Hamiltonian without boundary field."""
    require_geometry(chain, HALF_LINE, rows=1, what='H^0')
    return build_h_xxx(chain, p)


# ============================================================================
# LEVEL-1 OPERATORS
# ============================================================================

def _bilocal(chain: ChainSpec, field: str, row: int, coeff, g1: str, g2: str) -> OperatorSum:
    idx = list(chain.indices())
    terms = [(coeff, [((row, i), g1), ((row, j), g2)]) for n, i in enumerate(idx) for j in idx[n + 1:]]
    return from_terms(chain, field, terms)


def _e1_half(chain: ChainSpec, p: XxxParams, a: str, variant: str, row: int) -> OperatorSum:
    lam = p.lam
    if variant == PRIME:
        if a == PLUS:
            return _bilocal(chain, p.field, row, lam * HALF, PLUS, Z)
        if a == MINUS:
            return _bilocal(chain, p.field, row, -lam * HALF, MINUS, Z)
        return _bilocal(chain, p.field, row, lam, PLUS, MINUS)
    if a == PLUS:
        return _bilocal(chain, p.field, row, -lam * HALF, Z, PLUS)
    if a == MINUS:
        return _bilocal(chain, p.field, row, lam * HALF, Z, MINUS)
    return _bilocal(chain, p.field, row, -lam, MINUS, PLUS)


def build_e1(chain: ChainSpec, p: XxxParams, a: str, variant: str = FULL, row: Optional[int] = None) -> OperatorSum:
    """
    Level-1 bilocal operators, sums over i < j in range:

        E1'^+- = +-(lam/2) s+-_i sz_j      E1''^+- = -+(lam/2) sz_i s+-_j
        E1'^z  =  lam s+_i s-_j             E1''^z  = -lam s-_i s+_j

    full = prime + doubleprime. On the half line the same sums give (E1)^-.
    """
    _check_generator(a)
    _check_variant(variant)
    rows = _rows(chain, row)
    if len(rows) != 1:
        raise GeometryError("Two-row chains need an explicit row for E1; use model_double_row.build_ab")
    r = rows[0]
    if variant == FULL:
        return _e1_half(chain, p, a, PRIME, r) + _e1_half(chain, p, a, DOUBLEPRIME, r)
    return _e1_half(chain, p, a, variant, r)


def split_pairs(chain: ChainSpec) -> Dict[str, List[Tuple[int, int]]]:
    """
    Four-way split of the pairs i < j used when folding bilocal sums.

    left: i < j <= 0; cross: i <= 0 < j with i + j != 1; mirror: i + j = 1;
    right: 0 < i < j.
    """
    require_geometry(chain, FULL_LINE, what='split_pairs')
    out = {'left': [], 'cross': [], 'mirror': [], 'right': []}
    idx = list(chain.indices())
    for n, i in enumerate(idx):
        for j in idx[n + 1:]:
            if j <= 0:
                out['left'].append((i, j))
            elif i > 0:
                out['right'].append((i, j))
            elif i + j == 1:
                out['mirror'].append((i, j))
            else:
                out['cross'].append((i, j))
    return out


# ============================================================================
# MAGNETIC BOUNDARY SYMMETRIES
# ============================================================================

def build_x(chain: ChainSpec, p: XxxParams, sign: str, variant: str = FULL) -> OperatorSum:
    """
    Twisted-Yangian generators of the magnetic boundary (half line):

        X^+-   = E1^+- +- (lam/2) E0^+- E0^z + (lam/2)(1 -+ lam/mu) E0^+-
        X'^+-  = E1'^+- -+ (lam^2 / 4mu) E0^+-
        X''^+- = E1''^+- +- (lam/2) E0^+- E0^z + (lam/2)(1 -+ lam/(2mu)) E0^+-
    """
    require_geometry(chain, HALF_LINE, rows=1, what='X')
    if sign not in (PLUS, MINUS):
        raise ParameterError(f"X sign must be '+' or '-', got {sign!r}")
    _check_variant(variant)
    if p.mu == 0:
        raise ParameterError("X needs mu != 0 (open boundary uses G instead)")
    lam, mu, field = p.lam, p.mu, p.field
    s = 1 if sign == PLUS else -1
    e0 = build_e0(chain, sign, field)
    e1 = build_e1(chain, p, sign, variant)
    if variant == PRIME:
        return linear_combine([(1, e1), (-s * lam * lam / (4 * mu), e0)])
    e0z = build_e0(chain, Z, field)
    logger.debug(f"[BUILD] X^{sign} ({variant}) L={chain.L} lam={lam} mu={mu}")
    ratio = lam / mu if variant == FULL else lam / (2 * mu)
    return linear_combine([
        (1, e1),
        (s * lam * HALF, multiply(e0, e0z)),
        (lam * HALF * (1 - s * ratio), e0),
    ])


def fold_h_constant(p: XxxParams, constants: FoldingConstants):
    """Additive constant of fold(H_XXX) - 2 H^mu: -(lam/2)(1 + k^{+-} + k^{-+})."""
    return -p.lam * HALF * (1 + constants.k(PLUS, MINUS) + constants.k(MINUS, PLUS))


def fold_e1z_closed_form(chain: ChainSpec, p: XxxParams, constants: FoldingConstants) -> OperatorSum:
    """
    fold(E1^z) for constants obeying the k1 constraints:

        (lam/2) L (k^{+-} - k^{-+}) + (lam/2)(k^{+-} + k^{-+}) (E0^z)^-
    """
    require_geometry(chain, HALF_LINE, rows=1, what='fold(E1^z) closed form')
    k_pm, k_mp = constants.k(PLUS, MINUS), constants.k(MINUS, PLUS)
    return linear_combine([
        (p.lam * HALF * chain.L * (k_pm - k_mp), identity(chain, p.field)),
        (p.lam * HALF * (k_pm + k_mp), build_e0(chain, Z, p.field)),
    ])


# ============================================================================
# LEVEL 2 AND OPEN BOUNDARY
# ============================================================================

def build_e2(chain: ChainSpec, p: XxxParams, a: str, tilde: bool = False) -> OperatorSum:
    """
    Level-2 operators E2^+- = -+1/2 [E1^z, E1^+-], E2^z = [E1^+, E1^-].

    tilde=True adds the corrections needed before open-boundary folding:

        E2~^+ = E2^+ - 1/3([E1'^z, E1'^+] + [E1''^z, E1''^+]) + (lam^2/3)(E0^+ E0^- E0^+ - 9/4 E0^+)
        E2~^- = E2^- + 1/3([E1'^z, E1''^-] + [E1''^z, E1'^-]) + (lam^2/3)(E0^- E0^+ E0^- - 9/4 E0^-)
        E2~^z = E2^z + 2/3([E1'^+, E1'^-] + [E1''^+, E1''^-]) + (lam^2/6)((E0^z)^3 - 7/2 E0^z)

    Built on whatever geometry `chain` has; on the half line this is (E2)^-.
    """
    _check_generator(a)
    if a == Z:
        base = commutator(build_e1(chain, p, PLUS), build_e1(chain, p, MINUS))
    else:
        s = 1 if a == PLUS else -1
        base = linear_combine([(-s * HALF, commutator(build_e1(chain, p, Z), build_e1(chain, p, a)))])
    if not tilde:
        return base

    lam2 = p.lam * p.lam
    third = Fraction(1, 3)

    def e1(g, variant):
        return build_e1(chain, p, g, variant)

    if a == PLUS:
        bracket = commutator(e1(Z, PRIME), e1(PLUS, PRIME)) + commutator(e1(Z, DOUBLEPRIME), e1(PLUS, DOUBLEPRIME))
        e0p, e0m = build_e0(chain, PLUS, p.field), build_e0(chain, MINUS, p.field)
        cubic = linear_combine([(1, product(e0p, e0m, e0p)), (Fraction(-9, 4), e0p)])
        return linear_combine([(1, base), (-third, bracket), (lam2 * third, cubic)])
    if a == MINUS:
        bracket = commutator(e1(Z, PRIME), e1(MINUS, DOUBLEPRIME)) + commutator(e1(Z, DOUBLEPRIME), e1(MINUS, PRIME))
        e0p, e0m = build_e0(chain, PLUS, p.field), build_e0(chain, MINUS, p.field)
        cubic = linear_combine([(1, product(e0m, e0p, e0m)), (Fraction(-9, 4), e0m)])
        return linear_combine([(1, base), (third, bracket), (lam2 * third, cubic)])
    bracket = commutator(e1(PLUS, PRIME), e1(MINUS, PRIME)) + commutator(e1(PLUS, DOUBLEPRIME), e1(MINUS, DOUBLEPRIME))
    e0z = build_e0(chain, Z, p.field)
    cubic = linear_combine([(1, product(e0z, e0z, e0z)), (Fraction(-7, 2), e0z)])
    return linear_combine([(1, base), (2 * third, bracket), (lam2 / 6, cubic)])


def build_g(chain: ChainSpec, p: XxxParams, a: str) -> OperatorSum:
    """
    Open-boundary twisted generators on the half line:

        G^z  = E2^z - lam (E1^+ E0^- - E0^+ E1^-) - (lam^2/4) E0^z
        G^+- = E2^+- +- (lam/2)(E1^z E0^+- + E0^z E1^+-) - (lam^2/4) E0^+-
    """
    require_geometry(chain, HALF_LINE, rows=1, what='G')
    _check_generator(a)
    lam, field = p.lam, p.field
    quarter = lam * lam / 4
    e2 = build_e2(chain, p, a)
    if a == Z:
        e0p, e0m, e0z = (build_e0(chain, g, field) for g in (PLUS, MINUS, Z))
        e1p, e1m = build_e1(chain, p, PLUS), build_e1(chain, p, MINUS)
        return linear_combine([
            (1, e2),
            (-lam, multiply(e1p, e0m)),
            (lam, multiply(e0p, e1m)),
            (-quarter, e0z),
        ])
    s = 1 if a == PLUS else -1
    e0a, e0z = build_e0(chain, a, field), build_e0(chain, Z, field)
    e1a, e1z = build_e1(chain, p, a), build_e1(chain, p, Z)
    return linear_combine([
        (1, e2),
        (s * lam * HALF, multiply(e1z, e0a)),
        (s * lam * HALF, multiply(e0z, e1a)),
        (-quarter, e0a),
    ])
