"""
Double-Row Chain Operators

Two uncoupled chains (rows circle 'o' and bullet 'b') in the bulk, coupled
only through the diagonal boundary produced by fold_double with all-ones
constants.

- A^a_n = E^a_{n,o} + E^a_{n,b}, B^a_n = E^a_{n,o} - E^a_{n,b}
- H^delta = (H^ob)^- - lam (s+_{0o} s-_{0b} + s-_{0o} s+_{0b} + 1/2 sz_{0o} sz_{0b})
- H^delta_kappa = (H^ob_kappa)^- + D_kappa
- Y^a: twisted generators of the diagonal boundary

`kind` selects the nearest-neighbour ('xxx') or hyperbolic ('ino') chain.
"""

import logging
from fractions import Fraction
from typing import Optional

from spinfold.errors import GeometryError, ParameterError
from spinfold.model_inozemtsev import InoParams, build_e1_kappa, build_h_kappa
from spinfold.model_xxx import FULL, XxxParams, build_e0, build_e1, build_h_xxx
from spinfold.pauli_algebra import (
    HALF_LINE, MINUS, PLUS, ROW_BULLET, ROW_CIRCLE, Z, GENERATORS,
    ChainSpec, OperatorSum, from_terms, linear_combine, multiply, require_geometry,
)

logger = logging.getLogger(__name__)

KIND_XXX = 'xxx'
KIND_INO = 'ino'
KINDS = (KIND_XXX, KIND_INO)
ROWS = (ROW_CIRCLE, ROW_BULLET)

HALF = Fraction(1, 2)


def _resolve_kind(params, kind: Optional[str]) -> str:
    if kind is None:
        kind = KIND_INO if isinstance(params, InoParams) else KIND_XXX
    if kind not in KINDS:
        raise ParameterError(f"kind must be one of {KINDS}, got {kind!r}")
    expected = InoParams if kind == KIND_INO else XxxParams
    if not isinstance(params, expected):
        raise ParameterError(f"kind '{kind}' needs {expected.__name__}, got {type(params).__name__}")
    return kind


def _require_two_rows(chain: ChainSpec, what: str):
    if chain.rows != 2:
        raise GeometryError(f"{what} needs a two-row chain, got {chain.describe()}")


def build_h_double(chain: ChainSpec, params, kind: Optional[str] = None) -> OperatorSum:
    """Sum of the single-row Hamiltonians of both rows; no cross-row terms."""
    _require_two_rows(chain, 'H^ob')
    kind = _resolve_kind(params, kind)
    if kind == KIND_XXX:
        return build_h_xxx(chain, params)
    return build_h_kappa(chain, params, row=ROW_CIRCLE) + build_h_kappa(chain, params, row=ROW_BULLET)


def build_e1_row(chain: ChainSpec, params, a: str, row: int, variant: str = FULL,
                 kind: Optional[str] = None) -> OperatorSum:
    """Level-1 operator of one row (full, prime or doubleprime)."""
    _require_two_rows(chain, 'E1 row operator')
    kind = _resolve_kind(params, kind)
    if kind == KIND_XXX:
        return build_e1(chain, params, a, variant, row=row)
    return build_e1_kappa(chain, params, a, variant, row=row)


def build_ab(chain: ChainSpec, params, a: str, n: int, which: str, kind: Optional[str] = None,
             variant: str = FULL) -> OperatorSum:
    """
    A^a_n = E^a_{n,o} + E^a_{n,b} and B^a_n = E^a_{n,o} - E^a_{n,b}, n in {0, 1}.
    """
    _require_two_rows(chain, 'A/B')
    kind = _resolve_kind(params, kind)
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")
    if which not in ('A', 'B'):
        raise ParameterError(f"which must be 'A' or 'B', got {which!r}")
    field = params.field
    if n == 0:
        circle, bullet = build_e0(chain, a, field, ROW_CIRCLE), build_e0(chain, a, field, ROW_BULLET)
    elif n == 1:
        circle = build_e1_row(chain, params, a, ROW_CIRCLE, variant, kind)
        bullet = build_e1_row(chain, params, a, ROW_BULLET, variant, kind)
    else:
        raise ParameterError(f"Level n must be 0 or 1, got {n}")
    return circle + bullet if which == 'A' else circle - bullet


def build_d_kappa(chain: ChainSpec, p: InoParams) -> OperatorSum:
    """
    D_k = -(lam/2) sum_{alpha != beta} sum_{i, j <= 0} p(i+j-1)
          (s+_{i,alpha} s-_{j,beta} + s-_{i,alpha} s+_{j,beta} + 1/2 sz_{i,alpha} sz_{j,beta})

    i = j is included: the two sites sit on different rows.
    """
    require_geometry(chain, HALF_LINE, rows=2, what='D_kappa')
    k = p.kernels()
    idx = list(chain.indices())
    terms = []
    for alpha, beta in ((ROW_CIRCLE, ROW_BULLET), (ROW_BULLET, ROW_CIRCLE)):
        for i in idx:
            for j in idx:
                c = -0.5 * p.lam * k.p(i + j - 1)
                si, sj = (alpha, i), (beta, j)
                terms.append((c, [(si, PLUS), (sj, MINUS)]))
                terms.append((c, [(si, MINUS), (sj, PLUS)]))
                terms.append((0.5 * c, [(si, Z), (sj, Z)]))
    return from_terms(chain, p.field, terms)


def build_h_delta(chain: ChainSpec, params, kind: Optional[str] = None) -> OperatorSum:
    """Diagonal-boundary Hamiltonian on the two-row half line."""
    require_geometry(chain, HALF_LINE, rows=2, what='H^delta')
    kind = _resolve_kind(params, kind)
    bulk = build_h_double(chain, params, kind)
    logger.debug(f"[BUILD] H^delta ({kind}) on {chain.describe()}")
    if kind == KIND_INO:
        return bulk + build_d_kappa(chain, params)
    o, b = (ROW_CIRCLE, 0), (ROW_BULLET, 0)
    boundary = from_terms(chain, params.field, [
        (-params.lam, [(o, PLUS), (b, MINUS)]),
        (-params.lam, [(o, MINUS), (b, PLUS)]),
        (-params.lam * HALF, [(o, Z), (b, Z)]),
    ])
    return bulk + boundary


def build_y(chain: ChainSpec, params, a: str, kind: Optional[str] = None) -> OperatorSum:
    """
    Twisted generators of the diagonal boundary (two-row half line).

    xxx:
        Y^+- = B1^+- +- (lam/4)(B0^+- A0^z - A0^+- B0^z)
        Y^z  = -B1^z - (lam/2)(B0^+ A0^- - A0^+ B0^-)
    ino:
        Y^+-_k = B^+-_{k,1} +- (lam/2) sum_{i,j<=0} w(i+j-1)(s+-_{io} sz_{jb} - s+-_{jb} sz_{io})
        Y^z_k  = B^z_{k,1}  -  lam sum_{i,j<=0} w(i+j-1)(s+_{io} s-_{jb} - s+_{jb} s-_{io})

    Each equals half the all-ones fold_double of the matching B^a_1, except
    the xxx Y^z, which is minus half of it. This keeps Y^z_k -> Y^z as
    kappa grows, since B^z_{k,1} tends to -B1^z.
    """
    require_geometry(chain, HALF_LINE, rows=2, what='Y')
    kind = _resolve_kind(params, kind)
    if a not in GENERATORS:
        raise ParameterError(f"Generator must be one of {GENERATORS}, got {a!r}")
    b1 = build_ab(chain, params, a, 1, 'B', kind)
    if kind == KIND_XXX:
        return _y_xxx(chain, params, a, b1)
    return _y_kappa(chain, params, a, b1)


def _y_xxx(chain: ChainSpec, p: XxxParams, a: str, b1: OperatorSum) -> OperatorSum:
    def ab(g, which):
        return build_ab(chain, p, g, 0, which, KIND_XXX)

    if a == Z:
        return linear_combine([
            (-1, b1),
            (-p.lam * HALF, multiply(ab(PLUS, 'B'), ab(MINUS, 'A'))),
            (p.lam * HALF, multiply(ab(PLUS, 'A'), ab(MINUS, 'B'))),
        ])
    s = 1 if a == PLUS else -1
    quarter = s * p.lam / 4
    return linear_combine([
        (1, b1),
        (quarter, multiply(ab(a, 'B'), ab(Z, 'A'))),
        (-quarter, multiply(ab(a, 'A'), ab(Z, 'B'))),
    ])


def _y_kappa(chain: ChainSpec, p: InoParams, a: str, b1: OperatorSum) -> OperatorSum:
    k = p.kernels()
    idx = list(chain.indices())
    terms = []
    for i in idx:
        for j in idx:
            w = k.w(i + j - 1)
            io, jb = (ROW_CIRCLE, i), (ROW_BULLET, j)
            if a == Z:
                c = -p.lam * w
                terms.append((c, [(io, PLUS), (jb, MINUS)]))
                terms.append((-c, [(jb, PLUS), (io, MINUS)]))
            else:
                c = (0.5 if a == PLUS else -0.5) * p.lam * w
                terms.append((c, [(io, a), (jb, Z)]))
                terms.append((-c, [(jb, a), (io, Z)]))
    return b1 + from_terms(chain, p.field, terms)
