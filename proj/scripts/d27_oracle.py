#!/usr/bin/env python3
"""Independent discriminant oracle for ternary quartics.

D27 = 4^-7 Res(Q_x, Q_y, Q_z), with the resultant normalized by
Res(x^3, y^3, z^3) = 1.  The resultant is computed with Poisson's product
formula

    Res(F1, F2, F3) = Res(F1(x, y, 0), F2(x, y, 0))^3 * det(m_f3),

where m_f3 is multiplication by f3 = F3(x, y, 1) on C[x, y]/(f1, f2),
obtained from a Groebner basis.  This shares no code with the Macaulay
matrix used by the library.
"""

import argparse
import json
import random

import sympy
from sympy import Matrix, Rational, groebner, symbols

x, y, z = symbols("x y z")


def binary_resultant(a, b):
    """Sylvester resultant of two binary forms in x, y (Res(x^m, y^n) = 1)."""
    pa = sympy.Poly(a, x, y)
    pb = sympy.Poly(b, x, y)
    m = pa.total_degree()
    n = pb.total_degree()
    ca = [pa.coeff_monomial(x ** (m - i) * y**i) for i in range(m + 1)]
    cb = [pb.coeff_monomial(x ** (n - i) * y**i) for i in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + ca + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + cb + [0] * (size - n - 1 - i))
    return Matrix(rows).det()


def resultant3(f1, f2, f3):
    head = binary_resultant(f1.subs(z, 0), f2.subs(z, 0))
    if head == 0:
        raise ValueError("common zero at infinity; change coordinates")
    a1 = sympy.expand(f1.subs(z, 1))
    a2 = sympy.expand(f2.subs(z, 1))
    a3 = sympy.expand(f3.subs(z, 1))
    g = groebner([a1, a2], x, y, order="grevlex")
    # standard monomials: those not divisible by any leading monomial
    leads = [sympy.Poly(p, x, y).monoms(order="grevlex")[0] for p in g.exprs]
    basis = []
    for d in range(12):
        for i in range(d + 1):
            mono = (d - i, i)
            if not any(mono[0] >= l[0] and mono[1] >= l[1] for l in leads):
                basis.append(mono)
    if len(basis) != 9:
        raise ValueError(f"quotient has dimension {len(basis)}, expected 9")
    index = {m: k for k, m in enumerate(basis)}
    mat = sympy.zeros(9, 9)
    for k, (i, j) in enumerate(basis):
        _, r = g.reduce(sympy.expand(a3 * x**i * y**j))
        for mono, c in sympy.Poly(r, x, y).terms():
            mat[index[mono], k] = c
    return head**3 * mat.det()


def d27(q):
    r = resultant3(sympy.diff(q, x), sympy.diff(q, y), sympy.diff(q, z))
    return Rational(r, 4**7)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", required=True)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=27)
    args = ap.parse_args()
    if resultant3(x**3, y**3, z**3) != 1:
        raise SystemExit("normalization check failed")
    rng = random.Random(args.seed)
    mons = [(i, j, 4 - i - j) for i in range(4, -1, -1) for j in range(4 - i, -1, -1)]
    cases = []
    while len(cases) < args.count:
        coeffs = {m: rng.randint(-4, 4) for m in mons}
        q = sum(c * x**i * y**j * z**k for (i, j, k), c in coeffs.items())
        try:
            value = d27(q)
        except ValueError:
            continue
        cases.append({
            "quartic": {"coeffs": {f"{i}{j}{k}": str(c) for (i, j, k), c in coeffs.items() if c}},
            "d27": str(value),
        })
        print(len(cases), value, flush=True)
    with open(args.out, "w") as fh:
        json.dump({"source": "scripts/d27_oracle.py (Poisson formula, Groebner basis)", "cases": cases}, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
