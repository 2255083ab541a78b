"""
Operator Registry

Maps CLI operator identifiers to builders. Identifiers ignore spaces, so
`G z` and `Gz` name the same operator.

    xxx         E0a  E1a E1a' E1a''  E2a E2ta  Hxxx  Hmu  H0  X+- X'+- X''+-  Ga
    ino         Hk  Hk-  Hklo  Mkmu  Hkmu  Hk0  Ek1a Ek1a' Ek1a''  Ek2a Ek2ta
                Xk+- Xk'+- Xk''+-  Gka
    double row  Hoo  Hdelta  A0a B0a  A1a B1a (with ' or '')  Ya  Dk  Yka
    any         ID (identity on the geometry of the other terms)

a is one of + - z. Bulk identifiers (E*, Ek*, Hxxx, Hk, Hoo, A*, B*) live on
the full line; a trailing `^-` builds them on the half line instead.

Expressions: terms joined by ' + ' or ' - ' (spaces required, since ids
contain signs), each term `id` or `coeff*id`, e.g. `2*X+`, `2*H0 - 3/2*ID`.
"""

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from spinfold.errors import ParameterError, UnknownOperatorError
from spinfold.model_double_row import (
    KIND_INO, KIND_XXX, build_ab, build_d_kappa, build_h_delta, build_h_double, build_y,
)
from spinfold.model_inozemtsev import (
    InoParams, build_e1_kappa, build_e2_kappa, build_g_kappa, build_h_kappa, build_h_lo,
    build_h_mu_kappa, build_h_open_kappa, build_m_mu, build_x_kappa,
)
from spinfold.model_xxx import (
    DOUBLEPRIME, FULL, PRIME, XxxParams, build_e0, build_e1, build_e2, build_g, build_h_magnetic,
    build_h_open, build_h_xxx, build_x,
)
from spinfold.pauli_algebra import (
    FULL_LINE, HALF_LINE, ChainSpec, OperatorSum, identity, linear_combine,
)
from spinfold.scalars import FLOAT, coerce, parse_param

logger = logging.getLogger(__name__)

MODEL_XXX = 'xxx'
MODEL_INO = 'ino'
MODEL_DOUBLE_XXX = 'double-xxx'
MODEL_DOUBLE_INO = 'double-ino'
MODELS = (MODEL_XXX, MODEL_INO, MODEL_DOUBLE_XXX, MODEL_DOUBLE_INO)

HALF_SUFFIX = '^-'
_PRIMES = {'': FULL, "'": PRIME, "''": DOUBLEPRIME}


@dataclass(frozen=True)
class OperatorContext:
    """Couplings and lattice size shared by every id in an expression."""
    L: int
    lam: object = '1'
    mu: object = '0'
    kappa: Optional[float] = None
    field: str = 'exact'
    model: str = MODEL_XXX

    @classmethod
    def from_config(cls, cfg) -> 'OperatorContext':
        return cls(L=cfg.L, lam=cfg.lam, mu=cfg.mu if cfg.mu is not None else '0',
                   kappa=cfg.kappa, field=cfg.field, model=cfg.model)

    def xxx(self) -> XxxParams:
        return XxxParams(self.lam, self.mu, self.field)

    def ino(self) -> InoParams:
        if self.kappa is None:
            raise ParameterError("Long-range operators need --kappa")
        return InoParams(parse_param(self.lam, FLOAT), float(self.kappa), parse_param(self.mu, FLOAT))

    def double_params(self):
        return self.ino() if self.model == MODEL_DOUBLE_INO else self.xxx()

    @property
    def double_kind(self) -> str:
        return KIND_INO if self.model == MODEL_DOUBLE_INO else KIND_XXX

    def chain(self, geometry: str, rows: int = 1) -> ChainSpec:
        return ChainSpec(self.L, geometry, rows)


@dataclass(frozen=True)
class OperatorEntry:
    pattern: re.Pattern
    geometry: str
    rows: int
    bulk: bool
    build: Callable[[OperatorContext, ChainSpec, re.Match], OperatorSum]


def _entry(pattern: str, geometry: str, build, rows: int = 1, bulk: bool = False) -> OperatorEntry:
    return OperatorEntry(re.compile(pattern + r'$'), geometry, rows, bulk, build)


_G = r'([+\-z])'
_V = r"('{0,2})"

REGISTRY: List[OperatorEntry] = [
    # xxx
    _entry(r'E0' + _G, FULL_LINE, lambda c, ch, m: build_e0(ch, m[1], c.field), bulk=True),
    _entry(r'E1' + _G + _V, FULL_LINE, lambda c, ch, m: build_e1(ch, c.xxx(), m[1], _PRIMES[m[2]]), bulk=True),
    _entry(r'E2' + _G, FULL_LINE, lambda c, ch, m: build_e2(ch, c.xxx(), m[1]), bulk=True),
    _entry(r'E2t' + _G, FULL_LINE, lambda c, ch, m: build_e2(ch, c.xxx(), m[1], tilde=True), bulk=True),
    _entry(r'Hxxx', FULL_LINE, lambda c, ch, m: build_h_xxx(ch, c.xxx()), bulk=True),
    _entry(r'Hmu', HALF_LINE, lambda c, ch, m: build_h_magnetic(ch, c.xxx())),
    _entry(r'H0', HALF_LINE, lambda c, ch, m: build_h_open(ch, c.xxx())),
    _entry(r'X' + _V + r'([+\-])', HALF_LINE, lambda c, ch, m: build_x(ch, c.xxx(), m[2], _PRIMES[m[1]])),
    _entry(r'G' + _G, HALF_LINE, lambda c, ch, m: build_g(ch, c.xxx(), m[1])),
    # ino
    _entry(r'Hk', FULL_LINE, lambda c, ch, m: build_h_kappa(ch, c.ino()), bulk=True),
    _entry(r'Hk-', HALF_LINE, lambda c, ch, m: build_h_kappa(ch, c.ino())),
    _entry(r'Hklo', HALF_LINE, lambda c, ch, m: build_h_lo(ch, c.ino())),
    _entry(r'Mkmu', HALF_LINE, lambda c, ch, m: build_m_mu(ch, c.ino())),
    _entry(r'Hkmu', HALF_LINE, lambda c, ch, m: build_h_mu_kappa(ch, c.ino())),
    _entry(r'Hk0', HALF_LINE, lambda c, ch, m: build_h_open_kappa(ch, c.ino())),
    _entry(r'Ek1' + _G + _V, FULL_LINE, lambda c, ch, m: build_e1_kappa(ch, c.ino(), m[1], _PRIMES[m[2]]), bulk=True),
    _entry(r'Ek2' + _G, FULL_LINE, lambda c, ch, m: build_e2_kappa(ch, c.ino(), m[1]), bulk=True),
    _entry(r'Ek2t' + _G, FULL_LINE, lambda c, ch, m: build_e2_kappa(ch, c.ino(), m[1], tilde=True), bulk=True),
    _entry(r'Xk' + _V + r'([+\-])', HALF_LINE, lambda c, ch, m: build_x_kappa(ch, c.ino(), m[2], _PRIMES[m[1]])),
    _entry(r'Gk' + _G, HALF_LINE, lambda c, ch, m: build_g_kappa(ch, c.ino(), m[1])),
    # double row
    _entry(r'Hoo', FULL_LINE, lambda c, ch, m: build_h_double(ch, c.double_params(), c.double_kind),
           rows=2, bulk=True),
    _entry(r'Hdelta', HALF_LINE, lambda c, ch, m: build_h_delta(ch, c.double_params(), c.double_kind), rows=2),
    _entry(r'([AB])([01])' + _G + _V, FULL_LINE,
           lambda c, ch, m: _ab(c, ch, m), rows=2, bulk=True),
    _entry(r'Y' + _G, HALF_LINE, lambda c, ch, m: build_y(ch, c.xxx(), m[1], KIND_XXX), rows=2),
    _entry(r'Yk' + _G, HALF_LINE, lambda c, ch, m: build_y(ch, c.ino(), m[1], KIND_INO), rows=2),
    _entry(r'Dk', HALF_LINE, lambda c, ch, m: build_d_kappa(ch, c.ino()), rows=2),
]


def _ab(ctx: OperatorContext, chain: ChainSpec, m: re.Match) -> OperatorSum:
    which, level, gen, primes = m[1], int(m[2]), m[3], m[4]
    if level == 0 and primes:
        raise UnknownOperatorError(f"Level-0 operator {m[0]} has no primed variant")
    return build_ab(chain, ctx.double_params(), gen, level, which, ctx.double_kind, _PRIMES[primes])


def normalize_id(op_id: str) -> str:
    return ''.join(op_id.split())


def lookup(op_id: str) -> Tuple[OperatorEntry, re.Match, bool]:
    """Resolve an id to its registry entry; the flag marks a `^-` half-line request."""
    name = normalize_id(op_id)
    half = name.endswith(HALF_SUFFIX)
    if half:
        name = name[:-len(HALF_SUFFIX)]
    for entry in REGISTRY:
        match = entry.pattern.match(name)
        if match:
            if half and not entry.bulk:
                raise UnknownOperatorError(f"'{op_id}': {HALF_SUFFIX} applies to bulk operators only")
            return entry, match, half
    raise UnknownOperatorError(f"Unknown operator id '{op_id}'")


def operator_chain(op_id: str, ctx: OperatorContext) -> ChainSpec:
    entry, _, half = lookup(op_id)
    return ctx.chain(HALF_LINE if half else entry.geometry, entry.rows)


def build_operator(op_id: str, ctx: OperatorContext) -> OperatorSum:
    """Build a single registered operator."""
    entry, match, half = lookup(op_id)
    chain = ctx.chain(HALF_LINE if half else entry.geometry, entry.rows)
    op = entry.build(ctx, chain, match)
    logger.debug(f"[BUILD] {normalize_id(op_id)} on {chain.describe()}: {len(op.terms)} terms")
    return op


_SPLIT = re.compile(r'\s+([+\-])\s+')


def parse_expression(expr: str) -> List[Tuple[int, str, str]]:
    """Split into (sign, coeff text, id) triples."""
    parts = _SPLIT.split(' ' + expr.strip())
    terms = []
    sign = 1
    for n, part in enumerate(parts):
        if n % 2 == 1:
            sign = 1 if part == '+' else -1
            continue
        part = part.strip()
        if not part:
            continue
        coeff, _, name = part.rpartition('*')
        terms.append((sign, coeff.strip() or '1', name.strip()))
    if not terms:
        raise UnknownOperatorError(f"Empty operator expression '{expr}'")
    return terms


def build_expression(expr: str, ctx: OperatorContext, chain: Optional[ChainSpec] = None) -> OperatorSum:
    """
    Evaluate an operator expression. `chain` fixes where ID lives when the
    expression has no other term.
    """
    terms = parse_expression(expr)
    field = ctx.field if all(normalize_id(n) == 'ID' for _, _, n in terms) else None
    built: List[Tuple[object, Optional[OperatorSum], str]] = []
    for sign, coeff_text, name in terms:
        op = None if normalize_id(name) == 'ID' else build_operator(name, ctx)
        if op is not None:
            chain = chain or op.chain
            field = field or op.field
        built.append((sign, coeff_text, op))
    if chain is None:
        raise UnknownOperatorError(f"'{expr}': ID alone needs a target chain")
    pairs = []
    for sign, coeff_text, op in built:
        coeff = coerce(coeff_text, field)
        pairs.append((sign * coeff, op if op is not None else identity(chain, field)))
    return linear_combine(pairs, chain=chain, field=field)


def known_ids() -> Dict[str, str]:
    """Pattern -> geometry, for help text."""
    return {e.pattern.pattern[:-1]: f"{e.geometry} rows={e.rows}" for e in REGISTRY}
