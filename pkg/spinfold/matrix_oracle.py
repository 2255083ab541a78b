"""
Dense Matrix Oracle

Renders an OperatorSum as an explicit 2^N x 2^N complex matrix so the
symbolic algebra can be cross-checked by brute force.

Basis per site is (up, down); sites follow the canonical order (row-major,
ascending index), the first site being the most significant Kronecker
factor.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from spinfold import config
from spinfold.errors import OracleCapError, ParameterError
from spinfold.pauli_algebra import (
    GENERATORS, MINUS, PLUS, Z, ChainSpec, OperatorSum, PauliString, SiteId, commutator, multiply,
)
from spinfold.scalars import EXACT, ExactComplex

logger = logging.getLogger(__name__)

SITE_MATRICES = {
    PLUS: np.array([[0, 1], [0, 0]], dtype=complex),
    MINUS: np.array([[0, 0], [1, 0]], dtype=complex),
    Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
_EYE = np.eye(2, dtype=complex)

PRODUCT = 'product'
COMMUTATOR = 'commutator'


@dataclass
class DenseOperator:
    """Dense matrix plus the site order used for its Kronecker layout."""
    matrix: np.ndarray
    sites: List[SiteId]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def ascii(self, precision: int = 3) -> str:
        """Text dump; only for dimension <= 16."""
        if self.dimension > 16:
            raise OracleCapError(f"ASCII dump limited to dimension 16, got {self.dimension}")
        return np.array2string(self.matrix, precision=precision, suppress_small=True, max_line_width=200)


def _check_cap(chain: ChainSpec, max_sites: Optional[int]):
    cap = config.ORACLE_MAX_SITES if max_sites is None else max_sites
    if chain.n_sites > cap:
        raise OracleCapError(f"Dense oracle capped at {cap} sites, chain has {chain.n_sites}")


def _string_matrix(string: PauliString, sites: List[SiteId]) -> np.ndarray:
    gens = dict(string)
    out = np.ones((1, 1), dtype=complex)
    for site in sites:
        out = np.kron(out, SITE_MATRICES[gens[site]] if site in gens else _EYE)
    return out


def to_matrix(a: OperatorSum, max_sites: Optional[int] = None) -> DenseOperator:
    """sum_terms coeff * kron_sites M(generator), float arithmetic."""
    _check_cap(a.chain, max_sites)
    sites = a.chain.sites()
    dim = 2 ** len(sites)
    out = np.zeros((dim, dim), dtype=complex)
    for string, coeff in a.items():
        out += complex(coeff) * _string_matrix(string, sites)
    return DenseOperator(out, sites)


def random_operator(chain: ChainSpec, seed: int, n_terms: int = 5, max_support: int = 3,
                    field: str = EXACT) -> OperatorSum:
    """
    Reproducible random operator for property tests.

    Exact field: coefficients (p1/q1) + i (p2/q2) with small integers.
    Float field: standard normal real and imaginary parts.
    """
    if n_terms < 1:
        raise ParameterError("n_terms must be at least 1")
    if max_support < 0:
        raise ParameterError("max_support must be non-negative")
    rng = np.random.default_rng(seed)
    sites = chain.sites()
    terms = {}
    for _ in range(n_terms):
        size = int(rng.integers(0, min(max_support, len(sites)) + 1))
        chosen = sorted(sites[int(n)] for n in rng.choice(len(sites), size=size, replace=False))
        string = PauliString((s, GENERATORS[int(rng.integers(0, 3))]) for s in chosen)
        if field == EXACT:
            coeff = ExactComplex(Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))),
                                 Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))))
        else:
            coeff = complex(rng.standard_normal(), rng.standard_normal())
        terms[string] = terms.get(string, 0) + coeff
    return OperatorSum(chain, field, terms)


def oracle_equiv(a: OperatorSum, b: OperatorSum, op: str = PRODUCT, max_sites: Optional[int] = None) -> float:
    """Max-abs difference between the symbolic and the dense evaluation of op(a, b)."""
    ma, mb = to_matrix(a, max_sites).matrix, to_matrix(b, max_sites).matrix
    if op == PRODUCT:
        symbolic, dense = multiply(a, b), ma @ mb
    elif op == COMMUTATOR:
        symbolic, dense = commutator(a, b), ma @ mb - mb @ ma
    else:
        raise ParameterError(f"op must be '{PRODUCT}' or '{COMMUTATOR}', got {op!r}")
    diff = to_matrix(symbolic, max_sites).matrix - dense
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def oracle_sweep(chain: ChainSpec, n_pairs: int, seed: int, field: str = EXACT,
                 n_terms: int = 5, max_support: int = 3) -> float:
    """Worst oracle_equiv over seeded random pairs, both product and commutator."""
    worst = 0.0
    for n in range(n_pairs):
        a = random_operator(chain, seed + 2 * n, n_terms, max_support, field)
        b = random_operator(chain, seed + 2 * n + 1, n_terms, max_support, field)
        worst = max(worst, oracle_equiv(a, b, PRODUCT), oracle_equiv(a, b, COMMUTATOR))
    logger.info(f"[ORACLE] {n_pairs} pairs on {chain.describe()}: worst diff {worst:.3e}")
    return worst
