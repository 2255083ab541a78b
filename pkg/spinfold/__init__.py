"""
Spinfold: symbolic spin-chain operator algebra with folding maps

Components:
- scalars: exact complex-rational and float coefficient fields
- pauli_algebra: Pauli strings, operator sums, products and commutators
- folding: folding constants and the single-row / double-row folding maps
- model_xxx: XXX chain operators (Hamiltonians, Yangian levels, boundary images)
- model_inozemtsev: hyperbolic long-range chain operators and kernels
- model_double_row: two-row chains, diagonal boundary operators
- verify: residual classification, identity and relation checks, constant search
- matrix_oracle: dense matrix cross-check of the symbolic engine
- operators: named operator registry shared by the CLI and suites
- suites: verification suites with expected outcomes
- cli: `spinfold` command line entry point
"""

__version__ = '1.0.0'
