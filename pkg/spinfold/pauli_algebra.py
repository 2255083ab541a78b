"""
Pauli String Algebra

Canonical-form algebra of Pauli strings on finite one- or two-row chains.

Conventions:
- Generators are '+', '-', 'z'; identity is the absence of an entry ('0' only
  appears in site_product results and folding-constant keys)
- Sites are SiteId(row, index); canonical order is row-major (circle row
  before bullet row), then ascending index
- Full line covers -L+1..L, half line -L+1..0 (per row)
- An OperatorSum maps PauliString -> coefficient over one scalar field and
  one ChainSpec; zero coefficients are dropped, nothing else is pruned
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from spinfold.errors import ChainMismatchError, GeometryError, ParameterError
from spinfold.scalars import EXACT, FLOAT, check_field, coerce, format_scalar, magnitude, one, zero as scalar_zero


# ============================================================================
# GENERATORS, ROWS, GEOMETRY
# ============================================================================

PLUS = '+'
MINUS = '-'
Z = 'z'
IDENTITY = '0'
GENERATORS = (PLUS, MINUS, Z)

ROW_SINGLE = 0
ROW_CIRCLE = 1
ROW_BULLET = 2
ROW_SUFFIX = {ROW_SINGLE: '', ROW_CIRCLE: ',o', ROW_BULLET: ',b'}

FULL_LINE = 'full'
HALF_LINE = 'half'

_HALF = Fraction(1, 2)

# sigma^a sigma^b expanded in {1, +, -, z}; left factor first
_SITE_PRODUCT = {
    (IDENTITY, IDENTITY): ((Fraction(1), IDENTITY),),
    (PLUS, PLUS): (),
    (MINUS, MINUS): (),
    (PLUS, MINUS): ((_HALF, IDENTITY), (_HALF, Z)),
    (MINUS, PLUS): ((_HALF, IDENTITY), (-_HALF, Z)),
    (PLUS, Z): ((Fraction(-1), PLUS),),
    (MINUS, Z): ((Fraction(1), MINUS),),
    (Z, PLUS): ((Fraction(1), PLUS),),
    (Z, MINUS): ((Fraction(-1), MINUS),),
    (Z, Z): ((Fraction(1), IDENTITY),),
}
for _g in GENERATORS:
    _SITE_PRODUCT[(IDENTITY, _g)] = ((Fraction(1), _g),)
    _SITE_PRODUCT[(_g, IDENTITY)] = ((Fraction(1), _g),)


def site_product(a: str, b: str) -> List[Tuple[Fraction, str]]:
    """
    Expand sigma^a sigma^b on one site.

    Returns at most two (coefficient, generator-or-identity) pairs;
    an empty list means the product vanishes.
    """
    try:
        return list(_SITE_PRODUCT[(a, b)])
    except KeyError:
        raise ParameterError(f"Unknown generator pair ({a!r}, {b!r})") from None


@lru_cache(maxsize=None)
def product_table(field: str) -> Dict[Tuple[str, str], Tuple[Tuple[object, str], ...]]:
    return {key: tuple((coerce(c, field), g) for c, g in opts) for key, opts in _SITE_PRODUCT.items()}


class SiteId(NamedTuple):
    """Lattice site; tuple order (row, index) is the canonical order."""
    row: int
    index: int

    def label(self) -> str:
        return f"{self.index}{ROW_SUFFIX[self.row]}"


@dataclass(frozen=True)
class ChainSpec:
    """
    Lattice geometry.

    Attributes:
        L: chain half-length (full line has 2L sites per row, half line L)
        geometry: FULL_LINE or HALF_LINE
        rows: 1 (single row) or 2 (circle and bullet rows)
    """
    L: int
    geometry: str = FULL_LINE
    rows: int = 1

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 1:
            raise GeometryError(f"Chain length must be a positive integer, got {self.L!r}")
        if self.geometry not in (FULL_LINE, HALF_LINE):
            raise GeometryError(f"Unknown geometry '{self.geometry}'")
        if self.rows not in (1, 2):
            raise GeometryError(f"Rows must be 1 or 2, got {self.rows!r}")

    @property
    def first(self) -> int:
        return -self.L + 1

    @property
    def last(self) -> int:
        return self.L if self.geometry == FULL_LINE else 0

    def indices(self) -> range:
        return range(self.first, self.last + 1)

    def row_ids(self) -> Tuple[int, ...]:
        return (ROW_SINGLE,) if self.rows == 1 else (ROW_CIRCLE, ROW_BULLET)

    def sites(self) -> List[SiteId]:
        return [SiteId(r, i) for r in self.row_ids() for i in self.indices()]

    @property
    def n_sites(self) -> int:
        return len(self.indices()) * self.rows

    def contains(self, site: SiteId) -> bool:
        return site.row in self.row_ids() and self.first <= site.index <= self.last

    def site(self, index: int, row: Optional[int] = None) -> SiteId:
        if row is None:
            if self.rows != 1:
                raise GeometryError("Two-row chain needs an explicit row for each site")
            row = ROW_SINGLE
        s = SiteId(row, index)
        if not self.contains(s):
            raise GeometryError(f"Site {s.label()} outside chain {self.describe()}")
        return s

    def half(self) -> 'ChainSpec':
        return replace(self, geometry=HALF_LINE)

    def full(self) -> 'ChainSpec':
        return replace(self, geometry=FULL_LINE)

    def edge_indices(self, width: int) -> FrozenSet[int]:
        """
        Indices treated as truncation edge.

        Half line: -L+1 .. -L+width, away from the physical boundary at 0
        while width < L. Full line: the same window at -L+1 plus L-width+1 .. L,
        since a truncated bulk sum leaves residue at both cut ends.
        """
        if width <= 0:
            return frozenset()
        left = set(range(self.first, min(self.first + width, self.last + 1)))
        if self.geometry == FULL_LINE:
            left |= set(range(max(self.last - width + 1, self.first), self.last + 1))
        return frozenset(left)

    def describe(self) -> str:
        return f"{self.geometry} L={self.L} rows={self.rows}"

    def to_dict(self) -> Dict:
        return {'L': self.L, 'geometry': self.geometry, 'rows': self.rows}


def require_geometry(chain: ChainSpec, geometry: str, rows: Optional[int] = None, what: str = 'operation'):
    if chain.geometry != geometry:
        raise GeometryError(f"{what} needs a {geometry}-line chain, got {chain.describe()}")
    if rows is not None and chain.rows != rows:
        raise GeometryError(f"{what} needs a {rows}-row chain, got {chain.describe()}")


class PauliString(tuple):
    """
    Basis monomial: sorted tuple of (SiteId, generator) entries.

    The empty string is the identity. Instances are built by the algebra
    already sorted; use PauliString.of() for arbitrary input.
    """

    __slots__ = ()

    @classmethod
    def of(cls, entries: Iterable[Tuple[SiteId, str]]) -> 'PauliString':
        items = sorted(entries)
        seen = set()
        for site, gen in items:
            if gen not in GENERATORS:
                raise ParameterError(f"Generator must be one of {GENERATORS}, got {gen!r}")
            if site in seen:
                raise ParameterError(f"Site {site.label()} appears twice; use from_terms to reduce words")
            seen.add(site)
        return cls(items)

    def support(self) -> FrozenSet[SiteId]:
        return frozenset(site for site, _ in self)

    def generator_at(self, site: SiteId) -> str:
        for s, g in self:
            if s == site:
                return g
        return IDENTITY

    def render(self) -> str:
        if not self:
            return '1'
        return ' '.join(f"s{g}_{{{s.label()}}}" for s, g in self)


def support(p: PauliString) -> FrozenSet[SiteId]:
    return p.support()


def _string_product(p: PauliString, q: PauliString, table, unit) -> List[Tuple[object, PauliString]]:
    if not p:
        return [(unit, q)]
    if not q:
        return [(unit, p)]
    branches = [[unit, []]]
    i = j = 0
    np_, nq = len(p), len(q)
    while i < np_ and j < nq:
        sp, gp = p[i]
        sq, gq = q[j]
        if sp < sq:
            for b in branches:
                b[1].append(p[i])
            i += 1
        elif sq < sp:
            for b in branches:
                b[1].append(q[j])
            j += 1
        else:
            opts = table[(gp, gq)]
            if not opts:
                return []
            if len(opts) == 1:
                c, g = opts[0]
                for b in branches:
                    b[0] = b[0] * c
                    if g != IDENTITY:
                        b[1].append((sp, g))
            else:
                split = []
                for coef, entries in branches:
                    for c, g in opts:
                        e = list(entries)
                        if g != IDENTITY:
                            e.append((sp, g))
                        split.append([coef * c, e])
                branches = split
            i += 1
            j += 1
    rest = p[i:] if i < np_ else q[j:]
    return [(c, PauliString((*e, *rest))) for c, e in branches]


class OperatorSum:
    """
    Finite linear combination of Pauli strings.

    Immutable: every operation returns a new OperatorSum. Chain and field
    are carried even by the zero operator so mismatches stay detectable.
    """

    __slots__ = ('chain', 'field', '_terms')

    def __init__(self, chain: ChainSpec, field: str, terms: Optional[Dict[PauliString, object]] = None,
                 _trusted: bool = False):
        check_field(field)
        object.__setattr__(self, 'chain', chain)
        object.__setattr__(self, 'field', field)
        if _trusted:
            object.__setattr__(self, '_terms', terms or {})
            return
        clean = {}
        for string, coeff in (terms or {}).items():
            if not isinstance(string, PauliString):
                string = PauliString.of(string)
            for site, _ in string:
                if not chain.contains(site):
                    raise GeometryError(f"Site {site.label()} outside chain {chain.describe()}")
            c = coerce(coeff, field)
            if c:
                clean[string] = clean.get(string, scalar_zero(field)) + c
        object.__setattr__(self, '_terms', {s: c for s, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("OperatorSum is immutable")

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[PauliString, object]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def coefficient(self, string) -> object:
        if not isinstance(string, PauliString):
            string = PauliString.of(string)
        return self._terms.get(string, scalar_zero(self.field))

    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> FrozenSet[SiteId]:
        out = set()
        for s in self._terms:
            out.update(site for site, _ in s)
        return frozenset(out)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return linear_combine([(1, self), (-1, other)])

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, OperatorSum):
            return multiply(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __eq__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self.chain == other.chain and self.field == other.field and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        return f"OperatorSum({self.chain.describe()}, {self.field}, {len(self._terms)} terms)"

    def __str__(self):
        return render(self)


# ============================================================================
# CONSTRUCTORS
# ============================================================================

def zero(chain: ChainSpec, field: str = EXACT) -> OperatorSum:
    return OperatorSum(chain, field, {}, _trusted=True)


def identity(chain: ChainSpec, field: str = EXACT, coeff=1) -> OperatorSum:
    return OperatorSum(chain, field, {PauliString(): coeff})


def _normalize_site(chain: ChainSpec, site) -> SiteId:
    if isinstance(site, SiteId):
        if not chain.contains(site):
            raise GeometryError(f"Site {site.label()} outside chain {chain.describe()}")
        return site
    if isinstance(site, tuple):
        return chain.site(site[1], site[0])
    return chain.site(site)


def from_terms(chain: ChainSpec, field: str, terms: Iterable[Tuple[object, Sequence]]) -> OperatorSum:
    """
    Build an operator from (coefficient, word) pairs.

    A word is a sequence of (site, generator) pairs read left to right; a
    site may be an int (single-row chains) or a SiteId. Repeated sites are
    reduced with site_product in word order.
    """
    table = product_table(field)
    unit = one(field)
    out: Dict[PauliString, object] = {}
    for coeff, word in terms:
        c0 = coerce(coeff, field)
        if not c0:
            continue
        if isinstance(word, dict):
            word = list(word.items())
        partial = [(unit, PauliString())]
        for site, gen in word:
            if gen == IDENTITY:
                continue
            if gen not in GENERATORS:
                raise ParameterError(f"Generator must be one of {GENERATORS}, got {gen!r}")
            single = PauliString(((_normalize_site(chain, site), gen),))
            nxt = []
            for c, s in partial:
                for c2, s2 in _string_product(s, single, table, unit):
                    nxt.append((c * c2, s2))
            partial = nxt
            if not partial:
                break
        for c, s in partial:
            _accumulate(out, s, c0 * c)
    return OperatorSum(chain, field, _drop_zeros(out), _trusted=True)


def monomial(chain: ChainSpec, field: str, word: Sequence, coeff=1) -> OperatorSum:
    return from_terms(chain, field, [(coeff, word)])


def site_op(chain: ChainSpec, field: str, gen: str, index: int, row: Optional[int] = None, coeff=1) -> OperatorSum:
    return from_terms(chain, field, [(coeff, [(chain.site(index, row), gen)])])


def _accumulate(out: Dict, string: PauliString, value):
    prev = out.get(string)
    out[string] = value if prev is None else prev + value


def _drop_zeros(terms: Dict) -> Dict:
    return {s: c for s, c in terms.items() if c}


def _check_compatible(a: OperatorSum, b: OperatorSum):
    if a.chain != b.chain:
        raise ChainMismatchError(f"Chain mismatch: {a.chain.describe()} vs {b.chain.describe()}")
    if a.field != b.field:
        raise ChainMismatchError(f"Field mismatch: {a.field} vs {b.field}")


# ============================================================================
# ALGEBRA
# ============================================================================

def scale(a: OperatorSum, c) -> OperatorSum:
    c = coerce(c, a.field)
    if not c:
        return zero(a.chain, a.field)
    return OperatorSum(a.chain, a.field, _drop_zeros({s: v * c for s, v in a._terms.items()}), _trusted=True)


def linear_combine(pairs: Sequence[Tuple[object, OperatorSum]], chain: Optional[ChainSpec] = None,
                   field: Optional[str] = None) -> OperatorSum:
    """Sum of c_k * A_k; chain/field are required only for an empty list."""
    if not pairs:
        if chain is None or field is None:
            raise ParameterError("linear_combine of an empty list needs chain and field")
        return zero(chain, field)
    first = pairs[0][1]
    out: Dict[PauliString, object] = {}
    for c, op in pairs:
        _check_compatible(first, op)
        c = coerce(c, first.field)
        if not c:
            continue
        for s, v in op._terms.items():
            _accumulate(out, s, v * c)
    return OperatorSum(first.chain, first.field, _drop_zeros(out), _trusted=True)


def multiply(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    _check_compatible(a, b)
    table = product_table(a.field)
    unit = one(a.field)
    out: Dict[PauliString, object] = {}
    for p, cp in a._terms.items():
        for q, cq in b._terms.items():
            c = cp * cq
            for coef, s in _string_product(p, q, table, unit):
                _accumulate(out, s, c * coef)
    return OperatorSum(a.chain, a.field, _drop_zeros(out), _trusted=True)


def product(*ops: OperatorSum) -> OperatorSum:
    if not ops:
        raise ParameterError("product needs at least one operator")
    result = ops[0]
    for op in ops[1:]:
        result = multiply(result, op)
    return result


def power(a: OperatorSum, n: int) -> OperatorSum:
    if n < 0:
        raise ParameterError("Negative operator powers are not defined")
    if n == 0:
        return identity(a.chain, a.field)
    return product(*([a] * n))


def commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """AB - BA; pairs of strings with disjoint support are skipped."""
    _check_compatible(a, b)
    table = product_table(a.field)
    unit = one(a.field)
    b_sites = [(q, cq, {site for site, _ in q}) for q, cq in b._terms.items()]
    out: Dict[PauliString, object] = {}
    for p, cp in a._terms.items():
        p_sites = {site for site, _ in p}
        for q, cq, q_sites in b_sites:
            if p_sites.isdisjoint(q_sites):
                continue
            c = cp * cq
            for coef, s in _string_product(p, q, table, unit):
                _accumulate(out, s, c * coef)
            for coef, s in _string_product(q, p, table, unit):
                _accumulate(out, s, -(c * coef))
    return OperatorSum(a.chain, a.field, _drop_zeros(out), _trusted=True)


_DAGGER = {PLUS: MINUS, MINUS: PLUS, Z: Z}


def adjoint(a: OperatorSum) -> OperatorSum:
    out = {}
    for s, c in a._terms.items():
        out[PauliString((site, _DAGGER[g]) for site, g in s)] = c.conjugate()
    return OperatorSum(a.chain, a.field, out, _trusted=True)


def theta(a: OperatorSum) -> OperatorSum:
    """Sitewise automorphism sigma^+ <-> sigma^-, sigma^z -> -sigma^z."""
    out = {}
    for s, c in a._terms.items():
        sign = -1 if sum(1 for _, g in s if g == Z) % 2 else 1
        out[PauliString((site, _DAGGER[g]) for site, g in s)] = c if sign > 0 else -c
    return OperatorSum(a.chain, a.field, out, _trusted=True)


def swap_rows(a: OperatorSum) -> OperatorSum:
    """Exchange the circle and bullet rows of a two-row operator."""
    if a.chain.rows != 2:
        raise GeometryError("swap_rows needs a two-row chain")
    swap = {ROW_CIRCLE: ROW_BULLET, ROW_BULLET: ROW_CIRCLE}
    out = {}
    for s, c in a._terms.items():
        out[PauliString(sorted((SiteId(swap[site.row], site.index), g) for site, g in s))] = c
    return OperatorSum(a.chain, a.field, out, _trusted=True)


def restrict(a: OperatorSum, chain: ChainSpec) -> OperatorSum:
    """Reinterpret `a` on `chain`; every string must fit inside it."""
    if chain.rows != a.chain.rows:
        raise GeometryError(f"Cannot restrict {a.chain.describe()} to {chain.describe()}")
    for s in a._terms:
        for site, _ in s:
            if not chain.contains(site):
                raise GeometryError(f"Term {s.render()} has support outside {chain.describe()}")
    return OperatorSum(chain, a.field, dict(a._terms), _trusted=True)


def to_field(a: OperatorSum, field: str) -> OperatorSum:
    if field == a.field:
        return a
    if field == EXACT:
        raise ParameterError("Float operators cannot be converted to the exact field")
    return OperatorSum(a.chain, FLOAT, {s: complex(c) for s, c in a._terms.items()}, _trusted=True)


# ============================================================================
# QUERIES AND REPORT HELPERS
# ============================================================================

def edge_partition(a: OperatorSum, edge_window: int) -> Tuple[OperatorSum, OperatorSum]:
    """
    Split into (edge, interior).

    Edge terms touch an index in chain.edge_indices(edge_window): the window
    -L+1 .. -L+edge_window on the half line, and that window together with
    its mirror at the right end L on the full line. The constant term
    belongs to the interior.
    """
    if edge_window < 0:
        raise ParameterError("edge_window must be non-negative")
    edge_idx = a.chain.edge_indices(edge_window)
    edge, interior = {}, {}
    for s, c in a._terms.items():
        if any(site.index in edge_idx for site, _ in s):
            edge[s] = c
        else:
            interior[s] = c
    return (OperatorSum(a.chain, a.field, edge, _trusted=True),
            OperatorSum(a.chain, a.field, interior, _trusted=True))


def constant_term(a: OperatorSum):
    return a._terms.get(PauliString(), scalar_zero(a.field))


def without_constant(a: OperatorSum) -> OperatorSum:
    return OperatorSum(a.chain, a.field, {s: c for s, c in a._terms.items() if s}, _trusted=True)


def max_coefficient(a: OperatorSum) -> float:
    return max((magnitude(c) for c in a._terms.values()), default=0.0)


def largest_term(a: OperatorSum) -> Optional[Tuple[PauliString, object]]:
    """Term with the largest |coefficient|; ties broken by canonical order."""
    best = None
    for s, c in a.items():
        if best is None or magnitude(c) > magnitude(best[1]):
            best = (s, c)
    return best


def is_hermitian(a: OperatorSum, tol: float = 0.0) -> bool:
    return max_coefficient(adjoint(a) - a) <= tol


def render(a: OperatorSum, prune: float = 0.0) -> str:
    """One line per term: `(re,im) * s+_{-2} sz_{0}`; canonical order."""
    lines = []
    for s, c in a.items():
        if prune and magnitude(c) < prune:
            continue
        lines.append(f"{format_scalar(c)} * {s.render()}")
    return '\n'.join(lines) if lines else '0'


def support_histogram(a: OperatorSum) -> Dict[int, int]:
    """Number of terms per support size."""
    hist: Dict[int, int] = {}
    for s in a._terms:
        hist[len(s)] = hist.get(len(s), 0) + 1
    return dict(sorted(hist.items()))
