"""Independent symbolic oracles used by the tests.

Everything here goes through sympy so expected values never share code with
the finite-difference paths they check.
"""

from __future__ import annotations

import numpy as np
import sympy as sp


def symbolic_christoffel(metric_exprs, symbols, coords) -> np.ndarray:
    """Gamma[k, i, j] at a numeric point, from a symbolic metric matrix."""
    g = sp.Matrix(metric_exprs)
    ginv = g.inv()
    n = len(symbols)
    subs = dict(zip(symbols, coords))
    gamma = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                expr = sum(
                    sp.Rational(1, 2)
                    * ginv[k, l]
                    * (
                        sp.diff(g[j, l], symbols[i])
                        + sp.diff(g[i, l], symbols[j])
                        - sp.diff(g[i, j], symbols[l])
                    )
                    for l in range(n)
                )
                gamma[k, i, j] = float(expr.subs(subs))
    return gamma


def symbolic_gradient(metric_exprs, symbols, phi_expr, coords) -> np.ndarray:
    """Metric gradient g^{kl} d_l(phi) at a numeric point."""
    g = sp.Matrix(metric_exprs)
    ginv = g.inv()
    subs = dict(zip(symbols, coords))
    dphi = sp.Matrix([sp.diff(phi_expr, s) for s in symbols])
    grad = ginv * dphi
    return np.array([float(grad[i].subs(subs)) for i in range(len(symbols))])
