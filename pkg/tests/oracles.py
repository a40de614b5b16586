"""Independent reference computations in sympy.

These re-derive results from the defining equations instead of the
package's cleared, bihomogeneous forms, so agreement is a genuine
cross-check.  They only handle finite (affine) inputs.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp


def to_sympy(q) -> sp.Rational:
    q = Fraction(q)
    return sp.Rational(q.numerator, q.denominator)


def to_fraction(v) -> Fraction:
    v = sp.sympify(v)
    if not v.is_Rational:
        raise ValueError(f"not rational: {v}")
    return Fraction(int(v.p), int(v.q))


def _solve_single(equation, unknown):
    sols = sp.solve(sp.together(equation), unknown)
    if len(sols) != 1:
        raise ValueError(f"expected a unique solution, got {sols}")
    return sols[0]


def dpa2_oracle(b, f, g):
    """Solve the two A2 product equations for fbar, then gbar."""
    b = [to_sympy(v) for v in b]
    f, g = to_sympy(f), to_sympy(g)
    delta = sum(b)
    fb, gb = sp.symbols("fb gb")
    first = (f + g) * (fb + g) - sp.prod([g + b[i] for i in range(4)]) / ((g - b[4]) * (g - b[5]))
    fbar = _solve_single(first, fb)
    second = (fbar + g) * (fbar + gb) - sp.prod([fbar - b[i] for i in range(4)]) / (
        (fbar + b[6] - delta) * (fbar + b[7] - delta)
    )
    gbar = _solve_single(second, gb)
    return to_fraction(fbar), to_fraction(gbar)


def dpa1_oracle(b0, b, f, g):
    """Solve the two A1 ratio equations for fbar, then gbar."""
    bb0 = to_sympy(b0)
    b = [to_sympy(v) for v in b]
    f, g = to_sympy(f), to_sympy(g)
    delta = sum(b)
    bbar = bb0 - delta
    fb, gb = sp.symbols("fb gb")
    lhs1 = (g + f - 2 * bb0) * (g + fb - bb0 - bbar) / ((g + f) * (g + fb))
    rhs1 = sp.prod([g - bb0 + b[i] for i in range(4)]) / sp.prod([g - b[i] for i in range(4, 8)])
    fbar = _solve_single(lhs1 - rhs1, fb)
    lhs2 = (g + fbar - bb0 - bbar) * (gb + fbar - 2 * bbar) / ((g + fbar) * (gb + fbar))
    rhs2 = sp.prod([fbar - bbar - b[i] for i in range(4)]) / sp.prod([fbar + b[i] for i in range(4, 8)])
    gbar = _solve_single(lhs2 - rhs2, gb)
    return to_fraction(fbar), to_fraction(gbar)


def gauge_residues(residues, z_alpha, z_beta, p):
    """Residues of R A R^{-1} + R' R^{-1} for R(z) = I + (z_a - z_b)/(z - z_a) P.

    ``residues`` is a list of (z_i, A_i) with A_i as nested lists.  Returns
    the new residue at every z_i, the implied matrix at infinity, and
    whether the gauge-transformed A(z) is exactly the sum of those simple
    poles.
    """
    z = sp.symbols("z")
    m = len(p)
    P = sp.Matrix(p).applyfunc(to_sympy)
    za, zb = to_sympy(z_alpha), to_sympy(z_beta)
    ident = sp.eye(m)
    R = ident + (za - zb) / (z - za) * P
    Rinv = R.inv()
    A = sp.zeros(m, m)
    for zi, ai in residues:
        A += sp.Matrix(ai).applyfunc(to_sympy) / (z - to_sympy(zi))
    new = (R * A + R.diff(z)) * Rinv
    new = new.applyfunc(sp.cancel)
    simple_poles = True
    out = []
    for zi, _ in residues:
        zi = to_sympy(zi)
        res = sp.zeros(m, m)
        for i in range(m):
            for j in range(m):
                num, den = sp.fraction(sp.cancel((z - zi) * new[i, j]))
                if den.subs(z, zi) == 0:
                    simple_poles = False
                    continue
                res[i, j] = num.subs(z, zi) / den.subs(z, zi)
        out.append([[to_fraction(res[i, j]) for j in range(m)] for i in range(m)])
    remainder = sp.zeros(m, m)
    for (zi, _), r in zip(residues, out):
        remainder += sp.Matrix(r).applyfunc(to_sympy) / (z - to_sympy(zi))
    # A_new minus its principal parts must vanish identically (no other poles, no polynomial part).
    no_other_terms = all(sp.cancel(e) == 0 for e in (new - remainder))
    total = sp.zeros(m, m)
    for r in out:
        total += sp.Matrix(r).applyfunc(to_sympy)
    a_inf = [[to_fraction(-total[i, j]) for j in range(m)] for i in range(m)]
    return out, a_inf, simple_poles and no_other_terms


def lattice_isometry(matrix, gram):
    """M^T G M == G with sympy integer matrices."""
    M = sp.Matrix(matrix)
    G = sp.Matrix(gram)
    return M.T * G * M == G
