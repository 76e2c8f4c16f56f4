"""Independent reference computations used by the tests.

Nothing here calls the package's polynomial arithmetic: the G31 polynomial
is rebuilt from its 60 linear forms over the Gaussian integers with plain
dictionaries.
"""

from __future__ import annotations

from itertools import product

# a Gaussian integer is a pair (re, im)


def gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _unit(i):
    return tuple(int(j == i) for j in range(4))


def linear_forms():
    """The 60 hyperplanes as 4-tuples of Gaussian integer coefficients."""
    one, i_ = (1, 0), (0, 1)
    zero = (0, 0)
    forms = []
    for k in range(4):
        forms.append(tuple(one if j == k else zero for j in range(4)))
    # u^4 - v^4 = (u - v)(u + v)(u - i v)(u + i v)
    for a in range(4):
        for b in range(a + 1, 4):
            for c in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                forms.append(tuple(one if j == a else c if j == b else zero for j in range(4)))
    # x +- y +- z +- t
    for s1, s2, s3 in product((1, -1), repeat=3):
        forms.append((one, (s1, 0), (s2, 0), (s3, 0)))
    # (u +- v) +- i (w +- s) for the three pairings of coordinates
    for (u, v), (w, s) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        for s1, s2, s3 in product((1, -1), repeat=3):
            coeffs = [zero] * 4
            coeffs[u], coeffs[v] = one, (s1, 0)
            coeffs[w], coeffs[s] = (0, s2), (0, s2 * s3)
            forms.append(tuple(coeffs))
    return forms


def naive_f():
    poly = {(0, 0, 0, 0): (1, 0)}
    for form in linear_forms():
        new = {}
        for e, c in poly.items():
            for k, a in enumerate(form):
                if a == (0, 0):
                    continue
                e2 = list(e)
                e2[k] += 1
                e2 = tuple(e2)
                new[e2] = gadd(new.get(e2, (0, 0)), gmul(c, a))
        poly = {e: c for e, c in new.items() if c != (0, 0)}
    return poly


def f_value(point):
    v = (1, 0)
    for form in linear_forms():
        s = (0, 0)
        for a, xv in zip(form, point):
            s = gadd(s, gmul(a, (xv, 0)))
        v = gmul(v, s)
    return v
