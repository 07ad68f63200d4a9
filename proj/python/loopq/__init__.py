"""Exact loop-group engine.

Thin wrappers over the compiled core: table and report functions return the
parsed JSON documents, string functions return the printed forms.
"""

import json

from . import _core

__version__ = "0.1.0"

__all__ = [
    "r_table",
    "R_table",
    "certify",
    "bounds",
    "separation",
    "kpoly",
    "kpoly_terms",
    "translate",
    "translate_terms",
    "cocycle",
]


def r_table(max_l, trunc=None):
    """Logarithm coefficient table r_1 .. r_max_l as a parsed JSON document."""
    return json.loads(_core.r_table_json(max_l, -1 if trunc is None else trunc))


def R_table(max_n):
    """Asymptotic-series coefficient table R_0 .. R_max_n as a parsed JSON document."""
    return json.loads(_core.R_table_json(max_n))


def certify(max_l):
    """Parity-shape and nonvanishing certification for l <= max_l."""
    return json.loads(_core.certify_json(max_l))


def bounds(max_n):
    """Finite-range inequality suite up to max_n (requires max_n >= 9)."""
    return json.loads(_core.bounds_json(max_n))


def separation(l):
    """Leading-term versus tail comparison for r_l (requires l >= 5)."""
    return json.loads(_core.separation_json(l))


def kpoly(indices):
    """Kappa-class pushforward polynomial, printed."""
    return _core.kpoly(list(indices))


def kpoly_terms(indices):
    """Kappa-class pushforward polynomial as a parsed JSON document."""
    return json.loads(_core.kpoly_json(list(indices)))


def translate(k, lbar, r):
    """Descendent-to-ancestor expansion of a lead insertion, printed."""
    return _core.translate(k, lbar, r)


def translate_terms(k, lbar, r):
    """Descendent-to-ancestor expansion as a parsed JSON document."""
    return json.loads(_core.translate_json(k, lbar, r))


def cocycle(pp, qq):
    """Exact commutator defect of a quantized (pp, qq) monomial pair.

    Each monomial is [i, k] for a squared variable or [i, k, j, l]; the result
    is the exact scalar, printed.
    """
    return _core.cocycle(list(pp), list(qq))
