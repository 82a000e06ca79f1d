"""Symbolic M, K, B for 2-element single-beam meshes, frozen into
golden_two_element.inc for test_golden.cpp.

Independent of the C++ code path: global basis functions are built as
piecewise polynomials and every matrix entry is an exact sympy integral.
Material matches tests/support/specs.hpp::unit_material with h = 1/10, L = 1.

Usage: python3 golden_two_element.py > golden_two_element.inc
"""
import sympy as sp

x = sp.symbols("x")
R = sp.Rational
L = 1
nodes = [0, R(1, 2), 1]
h = R(1, 10)
rho, c11, c55, g31, g15, eps1, eps3, mu = 1, 1, R(1, 2), 1, R(7, 10), R(13, 10), 1, 1
beta1, beta3 = 1 / eps1, R(1) / eps3
alpha1 = c11 + g31**2 * beta3
alpha3 = c55 + g15**2 * beta1
coupling = g31 * beta3


def pieces(local):
    """local(e, xi_expr, le) -> expression on element e; returns per-element list."""
    return [local(e, (x - nodes[e]) / (nodes[e + 1] - nodes[e]), nodes[e + 1] - nodes[e]) for e in range(2)]


def p1(node):
    def f(e, xi, le):
        if node == e:
            return 1 - xi
        if node == e + 1:
            return xi
        return sp.Integer(0)
    return pieces(f)


def hermite(node, comp):
    def f(e, xi, le):
        if node == e:
            return [1 - 3 * xi**2 + 2 * xi**3, le * (xi - 2 * xi**2 + xi**3)][comp]
        if node == e + 1:
            return [3 * xi**2 - 2 * xi**3, le * (-xi**2 + xi**3)][comp]
        return sp.Integer(0)
    return pieces(f)


def d(fn, k):
    return [sp.diff(p, x, k) for p in fn]


def integral(a, b):
    return sum(sp.integrate(sp.expand(a[e] * b[e]), (x, nodes[e], nodes[e + 1])) for e in range(2))


def one_point(a, b):
    """Midpoint rule per element (reduced shear integration)."""
    total = 0
    for e in range(2):
        mid = (nodes[e] + nodes[e + 1]) / sp.Integer(2)
        le = nodes[e + 1] - nodes[e]
        total += le * a[e].subs(x, mid) * b[e].subs(x, mid)
    return total


def build(eb):
    fields = []  # (name, basis function list)
    fields += [("v", p1(i)) for i in range(3)]
    if eb:
        fields += [("w", hermite(i, c)) for i in range(3) for c in range(2)]
    else:
        fields += [("w", p1(i)) for i in range(3)]
        fields += [("psi", p1(i)) for i in range(3)]
    fields += [("q", p1(i)) for i in range(3)]
    n = len(fields)
    zero = [sp.Integer(0)] * 2

    def comp(name, fn, want):
        return fn if name == want else zero

    K = sp.zeros(n, n)
    M = sp.zeros(n, n)
    B = sp.zeros(n, 1)
    for i, (fi, bi) in enumerate(fields):
        for j, (fj, bj) in enumerate(fields):
            vi, vj = d(comp(fi, bi, "v"), 1), d(comp(fj, bj, "v"), 1)
            qi, qj = d(comp(fi, bi, "q"), 1), d(comp(fj, bj, "q"), 1)
            k = h * (alpha1 * integral(vi, vj) - coupling * (integral(vi, qj) + integral(qi, vj))
                     + beta3 * integral(qi, qj))
            if eb:
                k += h * alpha1 * h**2 / 12 * integral(d(comp(fi, bi, "w"), 2), d(comp(fj, bj, "w"), 2))
            else:
                k += h * alpha1 * h**2 / 12 * integral(d(comp(fi, bi, "psi"), 1), d(comp(fj, bj, "psi"), 1))
                si = [a + b for a, b in zip(d(comp(fi, bi, "w"), 1), comp(fi, bi, "psi"))]
                sj = [a + b for a, b in zip(d(comp(fj, bj, "w"), 1), comp(fj, bj, "psi"))]
                k += h * alpha3 * one_point(si, sj)
            K[i, j] = k
            m = rho * h * (integral(comp(fi, bi, "v"), comp(fj, bj, "v")) + integral(comp(fi, bi, "w"), comp(fj, bj, "w")))
            rot = "w" if eb else "psi"
            ri = d(comp(fi, bi, rot), 1) if eb else comp(fi, bi, rot)
            rj = d(comp(fj, bj, rot), 1) if eb else comp(fj, bj, rot)
            m += rho * h * h**2 / 12 * integral(ri, rj)
            m += mu * h * integral(comp(fi, bi, "q"), comp(fj, bj, "q"))
            M[i, j] = m
        # W = -V int q' dx
        B[i] = -sum(sp.integrate(p, (x, nodes[e], nodes[e + 1])) for e, p in enumerate(d(comp(fi, bi, "q"), 1)))
    return M, K, B


def emit(name, mat):
    rows = []
    for i in range(mat.rows):
        rows.append("    {" + ", ".join(f"{float(mat[i, j]):.17g}" for j in range(mat.cols)) + "}")
    print(f"inline const std::vector<std::vector<double>> {name} = {{")
    print(",\n".join(rows))
    print("};")


print("// Generated by golden_two_element.py; do not edit.")
print("#pragma once")
print("#include <vector>")
print("namespace golden {")
for tag, eb in (("eb", True), ("mt", False)):
    M, K, B = build(eb)
    emit(f"{tag}_mass", M)
    emit(f"{tag}_stiffness", K)
    emit(f"{tag}_input", B)
print("}  // namespace golden")
