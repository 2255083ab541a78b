"""
Hyperbolic Inozemtsev Chain Operators

Kernels (kappa > 0, z != 0):
    p(z)  = sinh^2(kappa) / sinh^2(kappa z)          hopping kernel
    w(z)  = -coth(kappa z)                            Yangian kernel
    w'(z) = e^{-kappa z} / (e^{-kappa z} - e^{kappa z})
    w''(z)= e^{kappa z} / (e^{-kappa z} - e^{kappa z})
with w(0) = w'(0) = w''(0) = 0 and w = w' + w''. All four tend to their
nearest-neighbour counterparts as kappa grows, so every builder here
reduces to the model_xxx operator of the same name in that limit.

Folded boundary operators on the half line use the through-the-boundary
separation i + j - 1. Everything is built in the float field.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from spinfold.errors import GeometryError, ParameterError
from spinfold.folding import FoldingConstants, FoldPreset, XXX_MAGNETIC, fold, preset_constants
from spinfold.model_xxx import DOUBLEPRIME, FULL, PRIME, VARIANTS, build_e0
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, MINUS, PLUS, Z, GENERATORS,
    ChainSpec, OperatorSum, commutator, constant_term, from_terms, linear_combine, product,
    require_geometry, scale,
)
from spinfold.scalars import FLOAT

logger = logging.getLogger(__name__)

KERNELS = ('p', 'w', 'w_prime', 'w_doubleprime')


@dataclass(frozen=True)
class InoParams:
    """
    Couplings of the hyperbolic chain.

    lam: nonzero hopping strength
    kappa: positive inverse range
    mu: boundary magnetic field (magnetic boundary only)
    """
    lam: float = 1.0
    kappa: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'lam', float(self.lam))
        object.__setattr__(self, 'kappa', float(self.kappa))
        object.__setattr__(self, 'mu', float(self.mu))
        if self.lam == 0:
            raise ParameterError("lambda must be nonzero")
        if not self.kappa > 0:
            raise ParameterError(f"kappa must be positive, got {self.kappa}")

    @property
    def field(self) -> str:
        return FLOAT

    def kernels(self) -> 'KernelSet':
        return KernelSet(self.kappa)

    def to_dict(self) -> Dict:
        return {'lambda': self.lam, 'kappa': self.kappa, 'mu': self.mu}


class KernelSet:
    """
    Kernel functions at fixed kappa, memoised per integer argument.

    Formulas are evaluated in overflow-free forms so large kappa*z gives
    the limiting values instead of inf/nan.
    """

    def __init__(self, kappa: float):
        if not kappa > 0:
            raise ParameterError(f"kappa must be positive, got {kappa}")
        self.kappa = float(kappa)
        self._cache: Dict = {}

    def p(self, z: int) -> float:
        if z == 0:
            raise ParameterError("Hopping kernel p is undefined at z = 0")
        key = ('p', z)
        if key not in self._cache:
            ratio = np.sinh(self.kappa) / np.sinh(self.kappa * abs(z))
            self._cache[key] = float(ratio * ratio)
        return self._cache[key]

    def w(self, z: int) -> float:
        if z == 0:
            return 0.0
        key = ('w', z)
        if key not in self._cache:
            self._cache[key] = float(-1.0 / np.tanh(self.kappa * z))
        return self._cache[key]

    def w_prime(self, z: int) -> float:
        if z == 0:
            return 0.0
        key = ('w_prime', z)
        if key not in self._cache:
            # 1 / (1 - e^{2 kappa z})
            x = 2.0 * self.kappa * z
            if x > 0:
                t = math.exp(-x)
                value = t / math.expm1(-x)
            else:
                value = -1.0 / math.expm1(x)
            self._cache[key] = value
        return self._cache[key]

    def w_doubleprime(self, z: int) -> float:
        if z == 0:
            return 0.0
        # e^{kz}/(e^{-kz} - e^{kz}) = w'(-z) up to the shared denominator
        return -self.w_prime(-z)

    def evaluate(self, which: str, z: int) -> float:
        if which not in KERNELS:
            raise ParameterError(f"Kernel must be one of {KERNELS}, got {which!r}")
        return getattr(self, which)(z)

    def for_variant(self, variant: str):
        return {FULL: self.w, PRIME: self.w_prime, DOUBLEPRIME: self.w_doubleprime}[variant]


def kernel_eval(kernels: KernelSet, which: str, z: int) -> float:
    return kernels.evaluate(which, z)


def kernel_table(kappa: float, z_max: int) -> pd.DataFrame:
    """Kernel values for z = -z_max..z_max (p left empty at z = 0)."""
    if z_max < 1:
        raise ParameterError("z_max must be at least 1")
    k = KernelSet(kappa)
    rows = []
    for z in range(-z_max, z_max + 1):
        rows.append({
            'z': z,
            'p': k.p(z) if z != 0 else np.nan,
            'w': k.w(z),
            'w_prime': k.w_prime(z),
            'w_doubleprime': k.w_doubleprime(z),
        })
    return pd.DataFrame(rows, columns=['z'] + list(KERNELS))


# ============================================================================
# BULK OPERATORS
# ============================================================================

def _row_of(chain: ChainSpec, row: Optional[int]) -> int:
    if row is None:
        if chain.rows != 1:
            raise GeometryError("Two-row chains need an explicit row")
        return chain.row_ids()[0]
    if row not in chain.row_ids():
        raise GeometryError(f"Row {row} not present in {chain.describe()}")
    return row


def _exchange(coeff, si, sj):
    return [
        (coeff, [(si, PLUS), (sj, MINUS)]),
        (coeff, [(si, MINUS), (sj, PLUS)]),
        (coeff * 0.5, [(si, Z), (sj, Z)]),
    ]


def build_h_kappa(chain: ChainSpec, p: InoParams, row: Optional[int] = None) -> OperatorSum:
    """-(lam/2) sum_{i != j} p(i-j)(s+_i s-_j + s-_i s+_j + 1/2 sz_i sz_j); half line gives H^-."""
    r = _row_of(chain, row)
    k = p.kernels()
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            if i != j:
                terms.extend(_exchange(-0.5 * p.lam * k.p(i - j), (r, i), (r, j)))
    logger.debug(f"[BUILD] H_kappa on {chain.describe()} kappa={p.kappa}: {len(terms)} raw terms")
    return from_terms(chain, FLOAT, terms)


def build_e1_kappa(chain: ChainSpec, p: InoParams, a: str, variant: str = FULL,
                   row: Optional[int] = None) -> OperatorSum:
    """
    Long-range level-1 operators, sums over all i, j in range:

        E^+-_{k,1} = +-(lam/2) w(i-j) s+-_i sz_j
        E^z_{k,1}  = lam w(i-j) s-_i s+_j

    prime/doubleprime replace w by w' / w''.
    """
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")
    if variant not in VARIANTS:
        raise ParameterError(f"Variant must be one of {VARIANTS}, got {variant!r}")
    r = _row_of(chain, row)
    kern = p.kernels().for_variant(variant)
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            wij = kern(i - j)
            if wij == 0:
                continue
            if a == Z:
                terms.append((p.lam * wij, [((r, i), MINUS), ((r, j), PLUS)]))
            else:
                s = 1.0 if a == PLUS else -1.0
                terms.append((s * 0.5 * p.lam * wij, [((r, i), a), ((r, j), Z)]))
    return from_terms(chain, FLOAT, terms)


# ============================================================================
# FOLDED BOUNDARY OPERATORS
# ============================================================================

def build_h_lo(chain: ChainSpec, p: InoParams) -> OperatorSum:
    """(lam/2) sum_{i != j <= 0} p(i+j-1)(s+_i s-_j + s-_i s+_j + 1/2 sz_i sz_j)."""
    require_geometry(chain, HALF_LINE, rows=1, what='H^lo')
    k = p.kernels()
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            if i != j:
                terms.extend(_exchange(0.5 * p.lam * k.p(i + j - 1), (0, i), (0, j)))
    return from_terms(chain, FLOAT, terms)


def build_m_mu(chain: ChainSpec, p: InoParams) -> OperatorSum:
    """-(lam/2) sum_{i != j <= 0} p(i+j-1) sz_i sz_j + mu sum_{i <= 0} p(2i-1) sz_i."""
    require_geometry(chain, HALF_LINE, rows=1, what='M^mu')
    k = p.kernels()
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            if i != j:
                terms.append((-0.5 * p.lam * k.p(i + j - 1), [(i, Z), (j, Z)]))
        terms.append((p.mu * k.p(2 * i - 1), [(i, Z)]))
    return from_terms(chain, FLOAT, terms)


def build_h_mu_kappa(chain: ChainSpec, p: InoParams) -> OperatorSum:
    """Magnetic boundary Hamiltonian H^- + H^lo + M^mu."""
    return build_h_kappa(chain, p) + build_h_lo(chain, p) + build_m_mu(chain, p)


def build_h_open_kappa(chain: ChainSpec, p: InoParams) -> OperatorSum:
    """
    Open boundary Hamiltonian H^- - H^lo.

    This is half the all-ones fold of H_kappa without its constant: the
    cross terms i <= 0 < j fold with k^{+0} k^{0-} = +1, so the through-the-
    boundary exchange enters with the opposite sign to the magnetic case
    (where k^{0+-} = -1 flips the hopping part).
    """
    return build_h_kappa(chain, p) - build_h_lo(chain, p)


def magnetic_constants(p: InoParams) -> FoldingConstants:
    """Constants whose fold of E_{k,1} gives 2 X_k at boundary field mu."""
    return preset_constants(FoldPreset(XXX_MAGNETIC, lam=p.lam, mu=p.mu))


def fold_h_kappa_constant(chain: ChainSpec, p: InoParams, constants: FoldingConstants) -> complex:
    """Additive constant of fold(H_kappa) - 2 H^mu_kappa on the truncated chain."""
    require_geometry(chain, FULL_LINE, rows=1, what='fold(H_kappa)')
    diff = fold(build_h_kappa(chain, p), constants) - scale(build_h_mu_kappa(chain.half(), p), 2)
    return constant_term(diff)


def h_kappa_constant_closed_form(chain: ChainSpec, p: InoParams, constants: FoldingConstants) -> float:
    """-(lam/2)(1 + k^{+-} + k^{-+}) sum_{i <= 0} p(2i-1)."""
    k = p.kernels()
    total = sum(k.p(2 * i - 1) for i in chain.half().indices())
    k_sum = complex(constants.k(PLUS, MINUS)) + complex(constants.k(MINUS, PLUS))
    return (-0.5 * p.lam * (1 + k_sum) * total).real


def _x_kappa_full(chain: ChainSpec, p: InoParams, sign: str, mu: float) -> OperatorSum:
    k = p.kernels()
    s = 1.0 if sign == PLUS else -1.0
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            if i != j:
                terms.append((s * 0.5 * p.lam * k.w(i + j - 1), [(i, sign), (j, Z)]))
        terms.append((-s * p.lam * p.lam / (2.0 * mu) * k.w(2 * i - 1), [(i, sign)]))
    return build_e1_kappa(chain, p, sign) + from_terms(chain, FLOAT, terms)


def build_x_candidate(chain: ChainSpec, p: InoParams, sign: str) -> OperatorSum:
    """X_kappa formula evaluated at any mu != 0 (negative controls use mu not in {+-lam})."""
    require_geometry(chain, HALF_LINE, rows=1, what='X_kappa')
    if p.mu == 0:
        raise ParameterError("X_kappa needs mu != 0")
    return _x_kappa_full(chain, p, sign, p.mu)


def build_x_kappa(chain: ChainSpec, p: InoParams, sign: str, variant: str = FULL) -> OperatorSum:
    """
    Twisted symmetries of the magnetic long-range boundary (mu = +-lam):

        X^+-_k = (E^+-_{k,1})^- +- (lam/2) sum_{i != j <= 0} w(i+j-1) s+-_i sz_j
                 -+ (lam^2 / 2mu) sum_{i <= 0} w(2i-1) s+-_i

    which is half the fold of E^+-_{k,1} with k^{z+-} = k^{+-z} = +-lam/mu.
    prime/doubleprime variants are half the folds of E'_{k,1} and E''_{k,1}
    with the same constants.
    """
    require_geometry(chain, HALF_LINE, rows=1, what='X_kappa')
    if sign not in (PLUS, MINUS):
        raise ParameterError(f"X sign must be '+' or '-', got {sign!r}")
    if variant not in VARIANTS:
        raise ParameterError(f"Variant must be one of {VARIANTS}, got {variant!r}")
    if not math.isclose(abs(p.mu), abs(p.lam), rel_tol=1e-12):
        raise ParameterError(f"X_kappa requires mu = +-lambda (got mu={p.mu}, lambda={p.lam})")
    if variant == FULL:
        return _x_kappa_full(chain, p, sign, p.mu)
    folded = fold(build_e1_kappa(chain.full(), p, sign, variant), magnetic_constants(p))
    return scale(folded, 0.5)


# ============================================================================
# LEVEL 2 AND OPEN BOUNDARY
# ============================================================================

def build_e2_kappa(chain: ChainSpec, p: InoParams, a: str, tilde: bool = False) -> OperatorSum:
    """
    E^+-_{k,2} = +-1/2 [E^z_{k,1}, E^+-_{k,1}], E^z_{k,2} = [E^+_{k,1}, E^-_{k,1}].

    tilde=True adds the bracket corrections built from the primed level-1
    operators and the cubic E0 terms, with the coefficients of the XXX case.
    """
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")

    def e1(g, variant=FULL):
        return build_e1_kappa(chain, p, g, variant)

    if a == Z:
        base = commutator(e1(PLUS), e1(MINUS))
    else:
        s = 0.5 if a == PLUS else -0.5
        base = scale(commutator(e1(Z), e1(a)), s)
    if not tilde:
        return base

    lam2 = p.lam * p.lam
    if a == PLUS:
        bracket = commutator(e1(Z, PRIME), e1(PLUS, DOUBLEPRIME)) + commutator(e1(Z, DOUBLEPRIME), e1(PLUS, PRIME))
        e0p, e0m = build_e0(chain, PLUS, FLOAT), build_e0(chain, MINUS, FLOAT)
        cubic = linear_combine([(1, product(e0p, e0m, e0p)), (-2.25, e0p)])
        return linear_combine([(1, base), (1 / 3, bracket), (lam2 / 3, cubic)])
    if a == MINUS:
        bracket = commutator(e1(Z, PRIME), e1(MINUS, PRIME)) + commutator(e1(Z, DOUBLEPRIME), e1(MINUS, DOUBLEPRIME))
        e0p, e0m = build_e0(chain, PLUS, FLOAT), build_e0(chain, MINUS, FLOAT)
        cubic = linear_combine([(1, product(e0m, e0p, e0m)), (-2.25, e0m)])
        return linear_combine([(1, base), (-1 / 3, bracket), (lam2 / 3, cubic)])
    bracket = commutator(e1(PLUS, PRIME), e1(MINUS, PRIME)) + commutator(e1(PLUS, DOUBLEPRIME), e1(MINUS, DOUBLEPRIME))
    e0z = build_e0(chain, Z, FLOAT)
    cubic = linear_combine([(1, product(e0z, e0z, e0z)), (-3.5, e0z)])
    return linear_combine([(1, base), (2 / 3, bracket), (lam2 / 6, cubic)])


def a_coefficient(k: KernelSet, i: int, j: int, l: int) -> float:
    """Three-site coefficient of the folded level-2 operator (half-line indices)."""
    w = k.w
    return (2.0
            - w(i - j) * (w(j - l) + w(i + l - 1) - w(i - l) - w(j + l - 1))
            - w(i + j - 1) * (w(i - l) + w(j - l) + w(i + l - 1) + w(j + l - 1)))


def b_coefficient(k: KernelSet, i: int, j: int) -> float:
    """Two-site coefficient of the folded level-2 operator (half-line indices, i != j)."""
    w = k.w
    return (5.0 + w(i - j) ** 2
            - w(i + j - 1) * (w(i + j - 1) - 4.0 * w(1 - 2 * j))
            - 2.0 * w(i - j) * (w(i + j - 1) + 2.0 * w(1 - 2 * j)))


def site_coefficient(k: KernelSet, i: int, idx: List[int]) -> float:
    """Coefficient of sa_i in the one-site part: sum_{j != i} b_ij - w(1-2i)^2."""
    return sum(b_coefficient(k, i, j) for j in idx if j != i) - k.w(1 - 2 * i) ** 2


def build_g_kappa(chain: ChainSpec, p: InoParams, a: str) -> OperatorSum:
    """
    Open-boundary twisted generators, built directly:

        G^a_k = 3/8 [ 16/3 (E^a_{k,2})^- + lam^2/3 sum_{ijl} a_ijl (sz_i sz_j sa_l + 4 s+_i s-_j sa_l)
                      + 2 lam^2/3 sum_i (sum_{j != i} b_ij - w(1-2i)^2) sa_i ]

    The triple sum runs over pairwise distinct i, j, l. The alternative path
    is 3/8 fold(E2~^a_k) with all-ones constants.
    """
    require_geometry(chain, HALF_LINE, rows=1, what='G_kappa')
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")
    k = p.kernels()
    lam2 = p.lam * p.lam
    idx = list(chain.indices())
    cubic_terms = []
    for i in idx:
        for j in idx:
            if j == i:
                continue
            for l in idx:
                if l == i or l == j:
                    continue
                c = a_coefficient(k, i, j, l) * lam2 / 3.0
                if c == 0:
                    continue
                cubic_terms.append((c, [(i, Z), (j, Z), (l, a)]))
                cubic_terms.append((4.0 * c, [(i, PLUS), (j, MINUS), (l, a)]))
    linear_terms = [(2.0 * lam2 / 3.0 * site_coefficient(k, i, idx), [(i, a)]) for i in idx]
    inner = linear_combine([
        (16.0 / 3.0, build_e2_kappa(chain, p, a)),
        (1, from_terms(chain, FLOAT, cubic_terms)),
        (1, from_terms(chain, FLOAT, linear_terms)),
    ])
    logger.debug(f"[BUILD] G_kappa^{a} L={chain.L} kappa={p.kappa}: {len(inner)} terms")
    return scale(inner, 0.375)
