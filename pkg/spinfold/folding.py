"""
Folding Maps

Multiplicative folding of full-line operators onto the half line:

- fold: single row. Site i > 0 is relabeled 1 - i; at each half-line site
  i <= 0 the pair (a_i, a_{1-i}) picks up the constant k(a_i, a_{1-i}) and
  is multiplied as sigma^{a_i} sigma^{a_{1-i}} (left-half generator first).
- fold_double: two rows. Half-line site i receives (a_i, b_{1-i}) on the
  circle row and (b_i, a_{1-i}) on the bullet row, so each row's right half
  lands mirrored on the other row.

Folding constants are a total 4x4 table over {+, -, z, 0}. Presets:
- xxx-magnetic(lambda, mu): k^{+-} = -2mu/lambda, k^{-+} = 2mu/lambda by default
- all-ones: every entry 1 (open boundary, diagonal double row)
- ino-magnetic(+/-): k^{+-} = -k^{-+} = +/-2, k^{z+} = -k^{z-} = +/-1/2
"""

import json
import logging
from dataclasses import dataclass
from itertools import product as cartesian
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from spinfold.errors import ParameterError
from spinfold.pauli_algebra import (
    FULL_LINE, IDENTITY, MINUS, PLUS, ROW_BULLET, ROW_CIRCLE, ROW_SINGLE, Z,
    OperatorSum, PauliString, SiteId, linear_combine, multiply, product_table, require_geometry,
)
from spinfold.scalars import EXACT, FLOAT, coerce, format_part, parse_param, to_pair

logger = logging.getLogger(__name__)

SYMBOLS = (PLUS, MINUS, Z, IDENTITY)
ALL_KEYS = tuple((a, b) for a in SYMBOLS for b in SYMBOLS)

XXX_MAGNETIC = 'xxx-magnetic'
ALL_ONES = 'all-ones'
INO_MAGNETIC = 'ino-magnetic'
PRESET_KINDS = (XXX_MAGNETIC, ALL_ONES, INO_MAGNETIC)


def key_name(a: str, b: str) -> str:
    """JSON key of entry k^{ab}, e.g. '+-', 'z0', '00'."""
    return f"{a}{b}"


_LETTERS = {'p': PLUS, 'm': MINUS}
# 'pm' stands for both signs, upper sign first
_SIGN_GROUPS = {'pm': (PLUS, MINUS), 'mp': (MINUS, PLUS)}


def _symbol(ch: str, name: str) -> str:
    ch = _LETTERS.get(ch, ch)
    if ch not in SYMBOLS:
        raise ParameterError(f"Unknown symbol {ch!r} in folding-constant key {name!r}")
    return ch


def expand_key(name: str) -> List[Tuple[str, str]]:
    """
    Entries named by a folding-constant key.

    Accepts the symbol form ('+-', 'z0'), the letter form with p = + and
    m = - ('pm', 'mz'), sign groups 'pm0', '0pm', 'pmz', 'zpm' standing for
    both signs, and whitespace-separated lists such as 'pm mp'.
    """
    tokens = name.split()
    if not tokens:
        raise ParameterError("Empty folding-constant key")
    out = []
    for token in tokens:
        if len(token) == 2:
            out.append((_symbol(token[0], name), _symbol(token[1], name)))
        elif len(token) == 3 and token[:2] in _SIGN_GROUPS:
            other = _symbol(token[2], name)
            out.extend((s, other) for s in _SIGN_GROUPS[token[:2]])
        elif len(token) == 3 and token[1:] in _SIGN_GROUPS:
            other = _symbol(token[0], name)
            out.extend((other, s) for s in _SIGN_GROUPS[token[1:]])
        else:
            raise ParameterError(f"Folding-constant key must be two of {SYMBOLS} or a sign group, got {name!r}")
    return out


def parse_key(name: str) -> Tuple[str, str]:
    keys = expand_key(name)
    if len(keys) != 1:
        raise ParameterError(f"Key {name!r} names {len(keys)} entries, expected one")
    return keys[0]


class FoldingConstants:
    """
    Table k^{ab}, a, b in {+, -, z, 0}.

    Entries not given default to 1 (k^{++} and k^{--} never matter since
    sigma^+ sigma^+ = 0). k^{00} must be 1. Values are kept as given
    (int, Fraction, float, complex) and converted to an operator's field
    when folding.
    """

    def __init__(self, entries: Optional[Dict[Tuple[str, str], object]] = None, name: str = 'custom'):
        table = {key: 1 for key in ALL_KEYS}
        for key, value in (entries or {}).items():
            for entry in (expand_key(key) if isinstance(key, str) else [key]):
                if entry not in table:
                    raise ParameterError(f"Unknown folding-constant entry {entry!r}")
                table[entry] = value
        if coerce(table[(IDENTITY, IDENTITY)], FLOAT) != 1:
            raise ParameterError("k^{00} must be 1")
        self._table = table
        self.name = name
        self._by_field: Dict[str, Dict] = {}

    def k(self, a: str, b: str):
        return self._table[(a, b)]

    def entries(self) -> Dict[Tuple[str, str], object]:
        return dict(self._table)

    def updated(self, overrides: Dict, name: Optional[str] = None) -> 'FoldingConstants':
        table = dict(self._table)
        for key, value in overrides.items():
            for entry in (expand_key(key) if isinstance(key, str) else [key]):
                table[entry] = value
        return FoldingConstants(table, name or f"{self.name}*")

    def for_field(self, field: str) -> Dict[Tuple[str, str], object]:
        cached = self._by_field.get(field)
        if cached is None:
            cached = {key: coerce(value, field) for key, value in self._table.items()}
            self._by_field[field] = cached
        return cached

    def to_dict(self) -> Dict:
        return constants_to_table(self)

    def __eq__(self, other):
        if not isinstance(other, FoldingConstants):
            return NotImplemented
        return self.for_field(FLOAT) == other.for_field(FLOAT)

    __hash__ = None

    def __repr__(self):
        return f"FoldingConstants({self.name})"


@dataclass(frozen=True)
class FoldPreset:
    """
    Named constant set.

    kind: xxx-magnetic | all-ones | ino-magnetic
    lam, mu: couplings (xxx-magnetic only)
    sign: +1 or -1 (ino-magnetic only)
    k_pm, k_mp: optional overrides of k^{+-}, k^{-+} (xxx-magnetic only)
    """
    kind: str
    lam: object = None
    mu: object = None
    sign: int = 1
    k_pm: object = None
    k_mp: object = None


def _k1_entries() -> Dict[Tuple[str, str], object]:
    # k^{+-0} = -k^{0+-} = k^{z0} = k^{0z} = 1, k^{zz} = 1
    return {
        (PLUS, IDENTITY): 1, (MINUS, IDENTITY): 1,
        (IDENTITY, PLUS): -1, (IDENTITY, MINUS): -1,
        (Z, IDENTITY): 1, (IDENTITY, Z): 1,
        (Z, Z): 1, (PLUS, PLUS): 1, (MINUS, MINUS): 1, (IDENTITY, IDENTITY): 1,
    }


def preset_constants(preset: FoldPreset) -> FoldingConstants:
    if preset.kind == ALL_ONES:
        return FoldingConstants({}, name=ALL_ONES)

    if preset.kind == XXX_MAGNETIC:
        lam, mu = preset.lam, preset.mu
        if lam is None or mu is None or lam == 0 or mu == 0:
            raise ParameterError(f"xxx-magnetic constants need nonzero lambda and mu (got {lam}, {mu})")
        gap = 4 * mu / lam
        k_pm, k_mp = preset.k_pm, preset.k_mp
        if k_pm is None and k_mp is None:
            k_pm, k_mp = -2 * mu / lam, 2 * mu / lam
        elif k_pm is None:
            k_pm = k_mp - gap
        elif k_mp is None:
            k_mp = k_pm + gap
        elif abs(complex(k_mp) - complex(k_pm) - complex(gap)) > 1e-12:
            raise ParameterError(f"k^(-+) - k^(+-) must equal 4mu/lambda = {gap}")
        ratio = lam / mu
        entries = _k1_entries()
        entries.update({
            (PLUS, MINUS): k_pm, (MINUS, PLUS): k_mp,
            (PLUS, Z): ratio, (Z, PLUS): ratio,
            (MINUS, Z): -ratio, (Z, MINUS): -ratio,
        })
        return FoldingConstants(entries, name=XXX_MAGNETIC)

    if preset.kind == INO_MAGNETIC:
        if preset.sign not in (1, -1):
            raise ParameterError(f"ino-magnetic sign must be +1 or -1, got {preset.sign}")
        s = preset.sign
        half = parse_param('1/2', EXACT)
        entries = _k1_entries()
        entries.update({
            (PLUS, MINUS): 2 * s, (MINUS, PLUS): -2 * s,
            (Z, PLUS): s * half, (PLUS, Z): s * half,
            (Z, MINUS): -s * half, (MINUS, Z): -s * half,
        })
        return FoldingConstants(entries, name=f"{INO_MAGNETIC}{'+' if s > 0 else '-'}")

    raise ParameterError(f"Unknown preset '{preset.kind}' (expected one of {PRESET_KINDS})")


# ============================================================================
# JSON CODEC
# ============================================================================

def constants_to_table(constants: FoldingConstants) -> Dict[str, list]:
    """{"+-": [re, im], ...}; exact values as "p/q" strings."""
    table = {}
    for (a, b), value in constants.entries().items():
        if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
            c = complex(value)
            if isinstance(value, int):
                table[key_name(a, b)] = [str(value), '0']
            else:
                table[key_name(a, b)] = [c.real, c.imag]
        else:
            table[key_name(a, b)] = to_pair(coerce(value, EXACT))
    return table


def _decode_part(part):
    if isinstance(part, str):
        return parse_param(part, EXACT)
    return part


def _decode_value(key: str, value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParameterError(f"Entry {key!r} must be a [re, im] pair")
        re_part, im_part = _decode_part(value[0]), _decode_part(value[1])
        if im_part == 0:
            return re_part
        if isinstance(re_part, float) or isinstance(im_part, float):
            return complex(float(re_part), float(im_part))
        return coerce((re_part, im_part), EXACT)
    return _decode_part(value)


def constants_from_table(table: Dict, name: str = 'table') -> FoldingConstants:
    """
    Inverse of constants_to_table. A key naming several entries ('pmz',
    'pm mp') takes either one value for all of them or a list with one
    [re, im] pair per entry, in expansion order.
    """
    entries = {}
    for key, value in table.items():
        keys = expand_key(key)
        per_entry = (len(keys) > 1 and isinstance(value, (list, tuple))
                     and all(isinstance(v, (list, tuple)) for v in value))
        values = list(value) if per_entry else [value] * len(keys)
        if len(values) != len(keys):
            raise ParameterError(f"Key {key!r} names {len(keys)} entries but got {len(values)} values")
        for entry, v in zip(keys, values):
            entries[entry] = _decode_value(key, v)
    return FoldingConstants(entries, name=name)


def load_constants(path) -> FoldingConstants:
    path = Path(path)
    with open(path, 'r') as f:
        table = json.load(f)
    logger.info(f"[FOLD] Loaded folding constants from {path}")
    return constants_from_table(table, name=path.stem)


def save_constants(constants: FoldingConstants, path):
    with open(path, 'w') as f:
        json.dump(constants_to_table(constants), f, indent=2, sort_keys=True)


def describe_constants(constants: FoldingConstants) -> str:
    parts = []
    for (a, b), value in constants.entries().items():
        v = coerce(value, FLOAT) if isinstance(value, (float, complex)) else coerce(value, EXACT)
        if isinstance(v, complex):
            text = format_part(v.real) if not v.imag else f"{v}"
        else:
            text = format_part(v.re) if not v.im else str(v)
        parts.append(f"k{a}{b}={text}")
    return ' '.join(parts)


# ============================================================================
# FOLDING MAPS
# ============================================================================

def _expand(coef, site_options: List[Tuple[SiteId, tuple]]) -> Iterable[Tuple[object, PauliString]]:
    """Multiply out per-site product options (already in canonical site order)."""
    if all(len(opts) == 1 for _, opts in site_options):
        entries = []
        for site, opts in site_options:
            c, g = opts[0]
            coef = coef * c
            if g != IDENTITY:
                entries.append((site, g))
        yield coef, PauliString(entries)
        return
    sites = [site for site, _ in site_options]
    for choice in cartesian(*(opts for _, opts in site_options)):
        c_total = coef
        entries = []
        for site, (c, g) in zip(sites, choice):
            c_total = c_total * c
            if g != IDENTITY:
                entries.append((site, g))
        yield c_total, PauliString(entries)


def fold(a: OperatorSum, constants: FoldingConstants) -> OperatorSum:
    """Single-row folding of a full-line operator onto the half line."""
    require_geometry(a.chain, FULL_LINE, rows=1, what='fold')
    half = a.chain.half()
    k = constants.for_field(a.field)
    table = product_table(a.field)
    out: Dict[PauliString, object] = {}
    for string, coeff in a.terms.items():
        gens = {site.index: g for site, g in string}
        targets = sorted({i if i <= 0 else 1 - i for i in gens})
        coef = coeff
        options = []
        for i in targets:
            x, y = gens.get(i, IDENTITY), gens.get(1 - i, IDENTITY)
            coef = coef * k[(x, y)]
            opts = table[(x, y)]
            if not coef or not opts:
                options = None
                break
            options.append((SiteId(ROW_SINGLE, i), opts))
        if options is None:
            continue
        for c, s in _expand(coef, options):
            prev = out.get(s)
            out[s] = c if prev is None else prev + c
    result = OperatorSum(half, a.field, {s: c for s, c in out.items() if c}, _trusted=True)
    logger.debug(f"[FOLD] fold {len(a)} terms -> {len(result)} terms ({constants.name})")
    return result


def fold_double(a: OperatorSum, constants: FoldingConstants) -> OperatorSum:
    """Two-row folding: circle row at i pairs with bullet row at 1-i and vice versa."""
    require_geometry(a.chain, FULL_LINE, rows=2, what='fold_double')
    half = a.chain.half()
    k = constants.for_field(a.field)
    table = product_table(a.field)
    out: Dict[PauliString, object] = {}
    for string, coeff in a.terms.items():
        circle = {site.index: g for site, g in string if site.row == ROW_CIRCLE}
        bullet = {site.index: g for site, g in string if site.row == ROW_BULLET}
        # circle row at i <= 0 takes (a_i, b_{1-i}); bullet row takes (b_i, a_{1-i})
        circle_targets = sorted({i for i in circle if i <= 0} | {1 - i for i in bullet if i > 0})
        bullet_targets = sorted({i for i in bullet if i <= 0} | {1 - i for i in circle if i > 0})
        coef = coeff
        options = []
        for row, targets, own, other in ((ROW_CIRCLE, circle_targets, circle, bullet),
                                         (ROW_BULLET, bullet_targets, bullet, circle)):
            for i in targets:
                x, y = own.get(i, IDENTITY), other.get(1 - i, IDENTITY)
                coef = coef * k[(x, y)]
                opts = table[(x, y)]
                if not coef or not opts:
                    options = None
                    break
                options.append((SiteId(row, i), opts))
            if options is None:
                break
        if options is None:
            continue
        for c, s in _expand(coef, options):
            prev = out.get(s)
            out[s] = c if prev is None else prev + c
    result = OperatorSum(half, a.field, {s: c for s, c in out.items() if c}, _trusted=True)
    logger.debug(f"[FOLD] fold_double {len(a)} terms -> {len(result)} terms ({constants.name})")
    return result


def fold_any(a: OperatorSum, constants: FoldingConstants) -> OperatorSum:
    """fold or fold_double, chosen by the operator's row count."""
    return fold_double(a, constants) if a.chain.rows == 2 else fold(a, constants)


def fold_quadratic(pairs: List[Tuple[object, OperatorSum, OperatorSum]], constants: FoldingConstants) -> OperatorSum:
    """Fold sum_k c_k P_k Q_k for user-chosen operator pairs."""
    if not pairs:
        raise ParameterError("fold_quadratic needs at least one (c, P, Q) triple")
    combined = linear_combine([(c, multiply(p, q)) for c, p, q in pairs])
    return fold_any(combined, constants)
