"""Degree-9 Hermite interpolation on [-m, m].

Matches value, first and second derivative at -m, 0 and +m. The center
conditions pin c_0, c_1, c_2 directly; the remaining six conditions form a
6x7 system in c_3..c_9 with one free coefficient, fixed to c_3 = 0. The
solve runs in the scaled variables a_i = c_i m^i, which makes the matrix a
constant, well-conditioned 6x6 independent of m.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError
from .numerics import LD, ld

# rows: value(+m), value(-m), deriv(+m)*m, deriv(-m)*m, curv(+m)*m^2,
# curv(-m)*m^2; columns: a_9..a_4 (a_3 is the free variable, fixed to 0)
_A = np.array(
    [
        [1, 1, 1, 1, 1, 1],
        [-1, 1, -1, 1, -1, 1],
        [9, 8, 7, 6, 5, 4],
        [9, -8, 7, -6, 5, -4],
        [72, 56, 42, 30, 20, 12],
        [-72, 56, -42, 30, -20, 12],
    ],
    dtype=LD,
)


def _gauss_solve(a, b):
    """Partial-pivot Gaussian elimination (LAPACK has no longdouble path)."""
    a = a.copy()
    b = b.copy()
    n = len(b)
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            raise SingularSystemError("singular interpolation system")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            fac = a[row, col] / a[col, col]
            a[row, col:] -= fac * a[col, col:]
            b[row] -= fac * b[col]
    x = np.zeros(n, dtype=LD)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def solve_interpolation(m, targets):
    """Coefficients c_0..c_9 hitting the nine targets.

    ``targets`` is (f-, f0, f+, f-', f0', f+', f-'', f0'', f+'').
    """
    m = ld(m)
    if not m > 0:
        raise SingularSystemError(f"half-width m must be positive, got {m}")
    fm, f0, fp, fmp, f0p, fpp, fmpp, f0pp, fppp = (ld(t) for t in targets)
    c = np.zeros(10, dtype=LD)
    c[0] = f0
    c[1] = f0p
    c[2] = f0pp / 2
    rhs = np.array(
        [
            fp - f0 - f0p * m - (f0pp / 2) * m * m,
            fm - f0 + f0p * m - (f0pp / 2) * m * m,
            (fpp - f0p - f0pp * m) * m,
            (fmp - f0p + f0pp * m) * m,
            (fppp - f0pp) * m * m,
            (fmpp - f0pp) * m * m,
        ],
        dtype=LD,
    )
    a = _gauss_solve(_A, rhs)  # a_9..a_4, with a_3 = 0
    for i, power in enumerate(range(9, 3, -1)):
        c[power] = a[i] / m**power
    return c


def poly_eval(c, theta, order=0):
    """Horner evaluation of the polynomial or its first two derivatives."""
    theta = ld(theta)
    if order == 0:
        coeffs = c
    elif order == 1:
        coeffs = [i * c[i] for i in range(1, len(c))]
    elif order == 2:
        coeffs = [i * (i - 1) * c[i] for i in range(2, len(c))]
    else:
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    acc = LD(0)
    for coef in reversed(coeffs):
        acc = acc * theta + coef
    return acc


def interpolation_residuals(c, m, targets):
    """Signed residuals of the nine constraints, in target order."""
    m = ld(m)
    pts = (-m, LD(0), m)
    out = []
    for order in range(3):
        for i, x in enumerate(pts):
            out.append(poly_eval(c, x, order) - ld(targets[3 * order + i]))
    return out
