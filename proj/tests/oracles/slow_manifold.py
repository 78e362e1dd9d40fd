"""Brute-force oracle for the deformation series Q.

Substitutes X_k = -2 + e^2 v(x + k e), Y_k = 1 + e^2 w(x + k e) into the lattice field
T2 + 2 T1 by Taylor expansion and solves, order by order, for the graph v = sum e^n Q_n(w)
being invariant. Q_n is an unknown combination of all w-monomials of weight n + 2
(w^(j) has weight j + 2). Order 0 has the two roots Q_0 = +-w0; the branch Q_0 = w0 is followed.
Prints the solution and the dimension of the solution set at each order.
"""
import itertools
import sys

import sympy as sp

ORDER = int(sys.argv[1]) if len(sys.argv) > 1 else 5
JMAX = ORDER + 8
e = sp.Symbol("e")
W = sp.symbols(f"w0:{JMAX + 1}")


def d(p):
    return sum(sp.diff(p, W[j]) * W[j + 1] for j in range(JMAX) if p.has(W[j]))


def keep(p, top):
    p = sp.expand(p)
    return sum(p.coeff(e, k) * e ** k for k in range(top + 1))


def taylor(p, k, n):
    out, cur = 0, p
    for j in range(n):
        out += (k * e) ** j / sp.factorial(j) * cur
        cur = d(cur)
    return sp.expand(out)


def monomials(weight):
    parts = []
    def rec(rem, lo, acc):
        if rem == 0:
            parts.append(acc)
            return
        for j in range(lo, rem - 1):
            if j + 2 <= rem:
                rec(rem - j - 2, j, acc + [j])
    rec(weight, 0, [])
    return [sp.Mul(*[W[j] for j in p]) for p in parts]


def field(Xs, Ys, top):
    xm, x0, x1 = Xs
    ym, y0, y1 = Ys
    fx = ym * (xm + x0 + 2) - y0 * (x0 + x1 + 2)
    fy = keep(y0 * keep(ym - y1 + (x0 - x1) * (x0 + x1 + 2), top), top)
    return keep(fx, top), fy


def residual(Q, top):
    """fx - sum_j dQ/dw_j d^j(fy) through e^top."""
    Xs = [-2 + e ** 2 * keep(taylor(Q, k, top), top - 2) for k in (-1, 0, 1)]
    Ys = [1 + e ** 2 * taylor(W[0], k, top - 1) for k in (-1, 0, 1)]
    fx, fy = field(Xs, Ys, top)
    # dv/dt = sum_j dQ/dw_j d^j(dw/dt)
    rhs, cur = 0, fy
    for j in range(JMAX - 4):
        qj = sp.diff(Q, W[j])
        if qj != 0:
            rhs += qj * cur
        cur = d(cur)
    return sp.expand(fx - rhs)


def bound(p):
    """sum |c| prod (j!)^e over the monomials c prod (w^(j))^e"""
    total = 0
    for mon, c in sp.Poly(p, *W).terms():
        total += abs(c) * sp.Mul(*[sp.factorial(j) ** k for j, k in enumerate(mon)])
    return total


def main():
    Q = 0
    unknown_dims = []
    for n in range(ORDER):
        basis = monomials(n + 2)
        cs = sp.symbols(f"c{n}_0:{len(basis)}")
        trial = Q + e ** n * sum(c * m for c, m in zip(cs, basis))
        r = residual(trial, n + 3)
        # the field starts at e^3, so Q_n first enters at e^(n+3)
        coeff = r.coeff(e, n + 3)
        eqs = sp.Poly(coeff, *W).coeffs() if coeff != 0 else []
        sol = sp.solve(eqs, cs, dict=True)
        if not sol:
            print(f"order {n}: no solution")
            return
        # order 0 is quadratic, (1 - a)(1 + a) = 0; take the branch Q_0 = w0
        sol = next(x for x in sol if n > 0 or x.get(cs[0]) == 1)
        free = [c for c in cs if c not in sol]
        unknown_dims.append(len(free))
        qn = sp.expand(sum(sol.get(c, c) * m for c, m in zip(cs, basis)).subs({c: 0 for c in free}))
        Q = sp.expand(Q + e ** n * qn)
        print(f"Q_{n} = {qn}   (free parameters: {len(free)})   K_{n} = {bound(qn)}")
    r = residual(Q, ORDER + 2)
    print("residual through e^%d: %s" % (ORDER + 2, [r.coeff(e, k) == 0 for k in range(ORDER + 3)]))


if __name__ == "__main__":
    main()
