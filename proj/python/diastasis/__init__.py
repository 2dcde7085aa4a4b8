"""Exact Calabi-diastasis analysis of Kähler potentials.

Rationals are returned as fractions.Fraction; complex coefficients as
(re, im) pairs of Fractions. Rational arguments accept int, Fraction or "p/q".
"""

from ._core import (
    DimensionError,
    DomainError,
    InvariantError,
    ParseError,
    Potential,
    acceptance,
    acceptance_count,
    builtin_potential,
    calabi_matrix,
    cone_inducibility,
    cone_ricci_flat,
    corpus_names,
    einstein_constant,
    epsilon_submatrix,
    find_inducing_multiple,
    flatness_witness,
    from_terms,
    inducibility,
    is_kahler_at_origin,
    parse_potential,
    parse_potential_text,
    ricci_flat,
    run_cli,
    sasaki_einstein_bridge,
)

__all__ = [name for name in dir() if not name.startswith("_")]
