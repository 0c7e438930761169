# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython twin of _kernel_py: term-map kernels for sparse polynomials.

Coefficients stay arbitrary-precision Python ints; the speedup comes from
typed loops and avoiding per-term Python function-call overhead in the
exponent-vector addition.
"""

IMPLEMENTATION = "cython"


def add_terms(dict a, dict b):
    """Termwise sum of two term maps."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for exp, coeff in b.items():
        s = out.get(exp, 0) + coeff
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def sub_terms(dict a, dict b):
    """Termwise difference a - b of two term maps."""
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for exp, coeff in b.items():
        s = out.get(exp, 0) - coeff
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


cdef inline tuple _exp_add(tuple ea, tuple eb):
    cdef Py_ssize_t n = len(ea)
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <object>ea[i] + <object>eb[i]
    return tuple(out)


def mul_terms(dict a, dict b):
    """Distributive product of two term maps."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple exp
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = _exp_add(<tuple>ea, <tuple>eb)
            s = out.get(exp, 0) + ca * cb
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def scale_terms(dict a, c):
    """Term map multiplied by a nonzero integer scalar."""
    if not c:
        return {}
    cdef dict out = {}
    for exp, coeff in a.items():
        out[exp] = coeff * c
    return out


def mul_monomial(dict a, tuple exp0, c):
    """Term map times the single term c * x^exp0."""
    if not c:
        return {}
    cdef dict out = {}
    for exp, coeff in a.items():
        out[_exp_add(<tuple>exp, exp0)] = coeff * c
    return out
