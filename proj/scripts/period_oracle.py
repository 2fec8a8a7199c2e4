#!/usr/bin/env python3
"""Independent period-matrix oracle for smooth plane quartics.

Produces fixture JSON files consumed by the C++ bridge.  The method:

1. Branch points of the projection (x:y:z) -> x/z are the roots of the
   y-discriminant of Q(x, y, 1).
2. For every branch point b, the loop from a base point x0 runs along a
   straight segment to a small circle around b and back.  The four sheets
   are continued by Newton steps; each piece is integrated with
   Gauss-Legendre on subintervals shorter than their distance to the
   branch locus.
3. Lifted loops that close up (Schreier generators of the sheet graph)
   give a generating set of the period lattice of (x, y, 1) dx / Q_y.
4. A Z-basis comes from rational coordinates and Hermite normal form.
5. The principal polarization is the short integer alternating form
   compatible with multiplication by i, found by LLL.
6. A symplectic basis for it gives (Omega_B; Omega_A), which is then
   Siegel-reduced so that theta series converge quickly.

Output omega rows 0-2 are periods over b_1..b_3, rows 3-5 over a_1..a_3,
columns are the differentials x, y, 1 (times dx / Q_y), so that
tau = Omega_1 Omega_2^-1 lies in the Siegel upper half-space.
"""

import argparse
import json
import random
from fractions import Fraction

import mpmath as mp
import sympy
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import hermite_normal_form
from sympy.polys.matrices import DomainMatrix

X, Y, Z = sympy.symbols("x y z")


def quartic_poly(coeffs):
    return sum(sympy.Rational(c) * X**i * Y**j * Z**k for (i, j, k), c in coeffs.items())


def parse_coeffs(d):
    return {(int(k[0]), int(k[1]), int(k[2])): Fraction(v) for k, v in d.items()}


class Curve:
    def __init__(self, coeffs):
        q = quartic_poly(coeffs)
        self.q = q
        f = sympy.Poly(q.subs(Z, 1), Y)
        if f.degree() != 4:
            raise ValueError("y^4 coefficient vanishes; transform the quartic first")
        # coefficient polynomials in x, highest y-degree first
        self.cx = [sympy.Poly(c, X).all_coeffs() for c in f.all_coeffs()]
        self.cx = [[mp.mpf(sympy.Rational(a).p) / sympy.Rational(a).q for a in c] for c in self.cx]
        self.dcx = [[a * (len(c) - 1 - k) for k, a in enumerate(c[:-1])] or [mp.mpf(0)] for c in self.cx]
        disc = sympy.Poly(sympy.discriminant(f.as_expr(), Y), X)
        if disc.degree() != 12:
            raise ValueError("x = infinity is a branch point; transform the quartic first")
        sq = sympy.sqf_part(disc.as_expr())
        if sympy.Poly(sq, X).degree() != 12:
            raise ValueError("non-simple branch points")
        dc = [int(a) for a in disc.all_coeffs()]
        self.branch = mp.polyroots(dc, maxsteps=500, extraprec=4 * mp.mp.prec)

    def ycoeffs(self, x):
        return [mp.polyval(c, x) for c in self.cx]

    def slope(self, x, y, dfy):
        """dy/dx = -Q_x / Q_y on the curve."""
        fx = mp.polyval([mp.polyval(c, x) for c in self.dcx], y)
        return -fx / dfy

    def roots(self, x):
        return mp.polyroots(self.ycoeffs(x), maxsteps=200, extraprec=2 * mp.mp.prec)

    def newton(self, a, da, y0):
        """Root of the y-polynomial with coefficients a, and the derivative there."""
        y = y0
        eps = mp.mpf(2) ** (-mp.mp.prec + 8)
        for _ in range(60):
            fy = mp.polyval(a, y)
            dfy = mp.polyval(da, y)
            step = fy / dfy
            y -= step
            if abs(step) <= eps * max(1, abs(y)):
                return y, dfy
        raise RuntimeError("Newton did not converge")

def seg_dist(p, a, b):
    d = b - a
    t = mp.re((p - a) * mp.conj(d)) / abs(d) ** 2
    t = min(max(t, 0), 1)
    return abs(p - (a + t * d))


class Integrator:
    def __init__(self, curve, degree=6):
        self.c = curve
        gl = mp.calculus.quadrature.GaussLegendre(mp.mp)
        self.nodes = gl.calc_nodes(degree, mp.mp.prec)

    def track(self, ys, dfs, x_from, x_to, depth=0):
        """Continue the sheet values ys (with Q_y values dfs) from x_from to x_to."""
        a = self.c.ycoeffs(x_to)
        da = [a[k] * (4 - k) for k in range(4)]
        h = x_to - x_from
        guess = [y + self.c.slope(x_from, y, d) * h for y, d in zip(ys, dfs)]
        new, nd = [], []
        ok = True
        for g in guess:
            try:
                v, d = self.c.newton(a, da, g)
            except RuntimeError:
                ok = False
                break
            new.append(v)
            nd.append(d)
        if ok:
            sep = min(abs(new[i] - new[j]) for i in range(4) for j in range(i))
            err = max(abs(new[i] - guess[i]) for i in range(4))
            ok = err < sep / 4
        if ok:
            return new, nd
        if depth > 40:
            raise RuntimeError("continuation failed")
        mid = (x_from + x_to) / 2
        half, hd = self.track(ys, dfs, x_from, mid, depth + 1)
        return self.track(half, hd, mid, x_to, depth + 1)

    def start(self, ys, x):
        """Q_y at the points (x, y) for y in ys."""
        a = self.c.ycoeffs(x)
        return [mp.polyval([a[k] * (4 - k) for k in range(4)], y) for y in ys]

    def piece(self, state, x_prev, xs, dxs, ws):
        ys, dfs = state
        acc = [[mp.mpc(0)] * 3 for _ in range(4)]
        for x, dx, w in zip(xs, dxs, ws):
            ys, dfs = self.track(ys, dfs, x_prev, x)
            x_prev = x
            for s in range(4):
                g = w * dx / dfs[s]
                acc[s][0] += g * x
                acc[s][1] += g * ys[s]
                acc[s][2] += g
        return (ys, dfs), x_prev, acc

    def segment(self, state, a, b):
        total = [[mp.mpc(0)] * 3 for _ in range(4)]
        x_prev = a
        for s0, s1 in self.subdivide(a, b):
            half = (s1 - s0) / 2
            mid = (s0 + s1) / 2
            xs = [mid + half * t for t, _ in self.nodes]
            ws = [w for _, w in self.nodes]
            state, x_prev, acc = self.piece(state, x_prev, xs, [half] * len(xs), ws)
            for s in range(4):
                for k in range(3):
                    total[s][k] += acc[s][k]
        state = self.track(*state, x_prev, b)
        return state, total

    def subdivide(self, a, b):
        out = []
        stack = [(a, b)]
        while stack:
            s0, s1 = stack.pop()
            d = min(seg_dist(p, s0, s1) for p in self.c.branch)
            if abs(s1 - s0) <= d:
                out.append((s0, s1))
            else:
                m = (s0 + s1) / 2
                stack.append((m, s1))
                stack.append((s0, m))
        return out

    def circle(self, state, center, radius, theta0, arcs=8):
        total = [[mp.mpc(0)] * 3 for _ in range(4)]
        x_prev = center + radius * mp.expj(theta0)
        step = 2 * mp.pi / arcs
        for k in range(arcs):
            t0 = theta0 + k * step
            half = step / 2
            xs, dxs, ws = [], [], []
            for t, w in self.nodes:
                th = t0 + half + half * t
                x = center + radius * mp.expj(th)
                xs.append(x)
                dxs.append(half * 1j * radius * mp.expj(th))
                ws.append(w)
            state, x_prev, acc = self.piece(state, x_prev, xs, dxs, ws)
            for s in range(4):
                for j in range(3):
                    total[s][j] += acc[s][j]
        state = self.track(*state, x_prev, center + radius * mp.expj(theta0))
        return state, total


def match(start, end):
    """Permutation p with end[p[s]] continuing start[s]: nearest values."""
    perm = []
    for y in start:
        d = [abs(y - e) for e in end]
        j = min(range(4), key=lambda i: d[i])
        perm.append(j)
    if sorted(perm) != [0, 1, 2, 3]:
        raise RuntimeError("ambiguous sheet matching")
    return perm


def choose_base(branch, rng):
    best = None
    span = max(abs(b) for b in branch) + 1
    for _ in range(400):
        x0 = mp.mpc(rng.uniform(-1.5, 1.5) * span, rng.uniform(-1.5, 1.5) * span)
        score = min(abs(x0 - b) for b in branch)
        for k, bk in enumerate(branch):
            for j, bj in enumerate(branch):
                if j != k:
                    score = min(score, seg_dist(bj, x0, bk))
        if best is None or score > best[0]:
            best = (score, x0)
    return best[1]


def lattice_generators(curve, rng, log, degree):
    integ = Integrator(curve, degree)
    br = curve.branch
    x0 = choose_base(br, rng)
    ys0 = [mp.mpc(r) for r in curve.roots(x0)]
    st0 = (ys0, integ.start(ys0, x0))
    loops = []  # (perm, value per sheet)
    for k, b in enumerate(br):
        r = min(abs(b - c) for c in br if c is not b) / 3
        for j, c in enumerate(br):
            if j != k:
                r = min(r, seg_dist(b, x0, c) / 2)
        u = (x0 - b) / abs(x0 - b)
        entry = b + r * u
        st_e, fwd = integ.segment(st0, x0, entry)
        st_c, circ = integ.circle(st_e, b, r, mp.arg(u))
        perm = match(st_c[0], st_e[0])  # sheet s on the circle ends on sheet perm[s]
        vals = []
        for s in range(4):
            t = perm[s]
            vals.append([fwd[s][i] + circ[s][i] - fwd[t][i] for i in range(3)])
        loops.append((perm, vals))
        log(f"  branch point {k + 1}/12 done, monodromy {perm}")
    # Schreier generators from a BFS spanning tree of the sheet graph
    path = {0: [mp.mpc(0)] * 3}
    queue = [0]
    while queue:
        s = queue.pop(0)
        for perm, vals in loops:
            t = perm[s]
            if t not in path:
                path[t] = [path[s][i] + vals[s][i] for i in range(3)]
                queue.append(t)
    if len(path) != 4:
        raise RuntimeError("monodromy is not transitive")
    gens = []
    for perm, vals in loops:
        for s in range(4):
            v = [path[s][i] + vals[s][i] - path[perm[s]][i] for i in range(3)]
            if max(abs(c) for c in v) > mp.mpf(10) ** (-mp.mp.dps // 2):
                gens.append(v)
    return gens


def realify(v):
    return [mp.re(c) for c in v] + [mp.im(c) for c in v]


def lattice_basis(gens):
    tol = mp.mpf(10) ** (-(mp.mp.dps * 2) // 3)
    # greedy independent subset, largest pivots first
    chosen = []
    for v in sorted(gens, key=lambda v: -max(abs(c) for c in v)):
        cand = chosen + [v]
        m = mp.matrix([realify(w) for w in cand])
        sv = mp.svd_r(m, compute_uv=False)
        if min(sv) > mp.mpf(10) ** -20:
            chosen = cand
        if len(chosen) == 6:
            break
    if len(chosen) != 6:
        raise RuntimeError("periods do not span a rank-6 lattice")
    b0 = mp.matrix([realify(w) for w in chosen]).T
    b0inv = mp.inverse(b0)
    cols = []
    den = 1
    fr = []
    for v in gens:
        c = b0inv * mp.matrix(realify(v))
        row = []
        for x in c:
            q = Fraction(mp.nstr(x, mp.mp.dps, strip_zeros=False)).limit_denominator(10**6)
            if abs(x - mp.mpf(q.numerator) / q.denominator) > tol:
                raise RuntimeError("lattice coordinates are not rational")
            row.append(q)
            den = den * q.denominator // __import__("math").gcd(den, q.denominator)
        fr.append(row)
    ints = Matrix([[int(q * den) for q in row] for row in fr]).T  # 6 x N
    h = hermite_normal_form(ints)
    if h.shape != (6, 6):
        raise RuntimeError("unexpected HNF shape")
    basis = []
    for j in range(6):
        coord = [mp.mpf(int(h[i, j])) / den for i in range(6)]
        re = b0 * mp.matrix(coord)
        basis.append([mp.mpc(re[i], re[i + 3]) for i in range(3)])
    # every generator must be an integer combination of the basis
    hinv = h.inv()
    for j in range(ints.shape[1]):
        sol = hinv * ints[:, j]
        if any(not x.is_integer for x in sol):
            raise RuntimeError("HNF basis does not contain the generators")
    return basis


def riemann_form(basis):
    lr = mp.matrix([realify(v) for v in basis]).T
    jc = mp.matrix(6, 6)
    for i in range(3):
        jc[i, i + 3] = -1
        jc[i + 3, i] = 1
    jl = mp.inverse(lr) * jc * lr
    pairs = [(i, j) for i in range(6) for j in range(i + 1, 6)]
    cols = []
    for i, j in pairs:
        e = mp.matrix(6, 6)
        e[i, j] = 1
        e[j, i] = -1
        d = jl.T * e * jl - e
        cols.append([d[r, c] for r in range(6) for c in range(6)])
    scale = mp.mpf(10) ** (mp.mp.dps // 2)
    rows = []
    for m, col in enumerate(cols):
        rows.append([ZZ(1 if m == n else 0) for n in range(15)] + [ZZ(int(mp.nint(scale * x))) for x in col])
    red = DomainMatrix(rows, (15, 51), ZZ).lll().to_Matrix()
    cands = []
    for r in range(15):
        e = [int(red[r, c]) for c in range(15)]
        if all(x == 0 for x in e):
            continue
        mat = [[0] * 6 for _ in range(6)]
        for (i, j), x in zip(pairs, e):
            mat[i][j] = x
            mat[j][i] = -x
        if Matrix(mat).det() == 1:
            resid = max(abs(sum(cols[m][q] * e[m] for m in range(15))) for q in range(36))
            cands.append((resid, mat))
    cands.sort(key=lambda t: t[0])
    if not cands or cands[0][0] > mp.mpf(10) ** (-mp.mp.dps // 3):
        raise RuntimeError("no principal polarization found")
    return cands[0][1]


def symplectic_basis(e):
    """Columns P with P^T E P = [[0, I], [-I, 0]]."""
    n = 6
    vecs = [[1 if i == j else 0 for i in range(n)] for j in range(n)]

    def form(u, v):
        return sum(u[i] * e[i][j] * v[j] for i in range(n) for j in range(n))

    a_list, b_list = [], []
    rest = vecs
    while rest:
        a = rest[0]
        others = rest[1:]
        # Euclid on E(a, w) over the remaining vectors
        while True:
            vals = [form(a, w) for w in others]
            nz = [i for i, v in enumerate(vals) if v != 0]
            if len(nz) == 1 and abs(vals[nz[0]]) == 1:
                break
            if not nz:
                raise RuntimeError("form is degenerate")
            p = min(nz, key=lambda i: abs(vals[i]))
            for i in nz:
                if i != p:
                    q = vals[i] // vals[p]
                    others[i] = [x - q * y for x, y in zip(others[i], others[p])]
            if len([i for i, v in enumerate([form(a, w) for w in others]) if v != 0]) == 0:
                raise RuntimeError("form is not unimodular")
        vals = [form(a, w) for w in others]
        p = [i for i, v in enumerate(vals) if v != 0][0]
        b = others[p] if vals[p] == 1 else [-x for x in others[p]]
        rem = [w for i, w in enumerate(others) if i != p]
        new = []
        for w in rem:
            fa = form(w, a)
            fb = form(w, b)
            # w - E(w,b) a + E(w,a) b is orthogonal to a and b
            new.append([wi - fb * ai + fa * bi for wi, ai, bi in zip(w, a, b)])
        a_list.append(a)
        b_list.append(b)
        rest = new
    return a_list, b_list


def tau_of(omega):
    o1 = mp.matrix([[omega[i][j] for j in range(3)] for i in range(3)])
    o2 = mp.matrix([[omega[i + 3][j] for j in range(3)] for i in range(3)])
    return o1 * mp.inverse(o2)


def apply_sp(m, omega):
    return [[sum(m[i][k] * omega[k][j] for k in range(6)) for j in range(3)] for i in range(6)]


def lll_gram(g):
    """Integer U with U G U^T LLL-reduced (3x3 Gram matrix)."""
    b = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def ip(u, v):
        return sum(u[i] * g[i][j] * v[j] for i in range(3) for j in range(3))

    def gram_schmidt():
        mu = [[0.0] * 3 for _ in range(3)]
        bb = [0.0] * 3
        for i in range(3):
            bb[i] = ip(b[i], b[i])
            for j in range(i):
                mu[i][j] = (ip(b[i], b[j]) - sum(mu[j][l] * mu[i][l] * bb[l] for l in range(j))) / bb[j]
                bb[i] -= mu[i][j] ** 2 * bb[j]
        return mu, bb

    k = 1
    while k < 3:
        for j in range(k - 1, -1, -1):
            q = round(gram_schmidt()[0][k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
        mu, bb = gram_schmidt()
        if bb[k] >= (0.75 - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            k = max(k - 1, 1)
    return b


def siegel_reduce(omega, log):
    ident = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    for it in range(50):
        tau = tau_of(omega)
        y = [[float(mp.im(tau[i, j])) for j in range(3)] for i in range(3)]
        u = lll_gram(y)
        uinv_t = [list(r) for r in Matrix(u).inv().T.tolist()]
        m = [row[:] for row in ident]
        for i in range(3):
            for j in range(3):
                m[i][j] = u[i][j]
                m[i + 3][j + 3] = int(uinv_t[i][j])
        omega = apply_sp(m, omega)
        tau = tau_of(omega)
        m = [row[:] for row in ident]
        for i in range(3):
            for j in range(i, 3):
                # round the upper triangle only: B must stay symmetric
                m[i][j + 3] = m[j][i + 3] = -int(mp.nint(mp.re(tau[i, j])))
        omega = apply_sp(m, omega)
        tau = tau_of(omega)
        if abs(tau[0, 0]) >= 0.99:
            return omega
        # quasi-inversion in the first coordinate
        m = [row[:] for row in ident]
        m[0][0] = 0
        m[3][3] = 0
        m[0][3] = -1
        m[3][0] = 1
        omega = apply_sp(m, omega)
    log("  warning: reduction did not settle")
    return omega


def period_matrix(coeffs, seed, log, degree=6):
    rng = random.Random(seed)
    curve = Curve(coeffs)
    log(f"  branch points: {len(curve.branch)}")
    gens = lattice_generators(curve, rng, log, degree)
    basis = lattice_basis(gens)
    e = riemann_form(basis)
    a_list, b_list = symplectic_basis(e)

    def cyc(v):
        return [sum(v[m] * basis[m][i] for m in range(6)) for i in range(3)]

    pa = [cyc(a) for a in a_list]
    pb = [cyc(b) for b in b_list]
    omega = pb + pa
    tau = tau_of(omega)
    if min(mp.eig(mp.matrix([[mp.im(tau[i, j]) for j in range(3)] for i in range(3)]))[0], key=lambda z: mp.re(z)).real <= 0:
        omega = pa + pb
        tau = tau_of(omega)
    omega = siegel_reduce(omega, log)
    tau = tau_of(omega)
    asym = max(abs(tau[i, j] - tau[j, i]) for i in range(3) for j in range(3))
    ev = mp.eig(mp.matrix([[mp.im(tau[i, j]) for j in range(3)] for i in range(3)]))[0]
    log(f"  asymmetry {mp.nstr(asym, 5)}, Im tau eigenvalues {[mp.nstr(mp.re(v), 5) for v in ev]}")
    if asym > mp.mpf(10) ** (-(mp.mp.dps - 10)) or min(mp.re(v) for v in ev) <= 0:
        raise RuntimeError("period matrix fails the Riemann relations")
    return omega


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quartic", required=True, help='JSON coefficients, e.g. {"400": "1", ...}')
    ap.add_argument("--out", required=True)
    ap.add_argument("--digits", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--source", default="scripts/period_oracle.py (mpmath numerical integration)")
    args = ap.parse_args()
    mp.mp.dps = args.digits + 30
    raw = json.loads(args.quartic)
    coeffs = parse_coeffs(raw)
    # 3 * 2^(d-1) nodes on pieces no longer than their distance to the
    # branch locus converge like 4.2^(-2n)
    degree = 5 if args.digits <= 45 else 6
    omega = period_matrix(coeffs, args.seed, lambda s: print(s, flush=True), degree)
    doc = {
        "quartic": {"coeffs": {f"{i}{j}{k}": str(c) for (i, j, k), c in sorted(coeffs.items(), reverse=True)}},
        "omega": [[[mp.nstr(mp.re(z), args.digits, min_fixed=1, max_fixed=0), mp.nstr(mp.im(z), args.digits, min_fixed=1, max_fixed=0)] for z in row] for row in omega],
        "digits": args.digits,
        "source": args.source,
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
