"""Pure-Python term-map kernels.

A term map is a dict mapping exponent tuples (one non-negative int per
variable) to nonzero arbitrary-precision integer coefficients.  The zero
polynomial is the empty dict.  These functions are the hot inner loops of
all polynomial arithmetic; a Cython twin lives in _kernel_cy.pyx and is
preferred at import time when available.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def add_terms(a, b):
    """Termwise sum of two term maps."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for exp, coeff in b.items():
        s = out.get(exp, 0) + coeff
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def sub_terms(a, b):
    """Termwise difference a - b of two term maps."""
    if not b:
        return dict(a)
    out = dict(a)
    for exp, coeff in b.items():
        s = out.get(exp, 0) - coeff
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def mul_terms(a, b):
    """Distributive product of two term maps."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(map(int.__add__, ea, eb))
            s = out.get(exp, 0) + ca * cb
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def scale_terms(a, c):
    """Term map multiplied by a nonzero integer scalar."""
    if not c:
        return {}
    return {exp: coeff * c for exp, coeff in a.items()}


def mul_monomial(a, exp0, c):
    """Term map times the single term c * x^exp0."""
    if not c:
        return {}
    return {tuple(map(int.__add__, exp, exp0)): coeff * c for exp, coeff in a.items()}
