"""Independent derivations of the frozen expected values used by the C++ tests.

Run with `python3 tests/oracles/derive_values.py`. Nothing here calls the C++
library; every value is computed from first principles with sympy/mpmath.
"""
import math

import sympy as sp


def bch_tail_coefficients(n_max):
    # X*Y is linear in Y up to the ideal terms: X + (adX / (1 - exp(-adX))) Y.
    # The coefficient of (adX)^j Y is the j-th Taylor coefficient of z/(1-e^{-z}).
    z = sp.symbols("z")
    series = sp.series(z / (1 - sp.exp(-z)), z, 0, n_max + 1).removeO()
    return {j: sp.nsimplify(series.coeff(z, j)) for j in range(0, n_max + 1)}


def conjugation_f3():
    # (-t e1) * Y * (t e1) = exp(-t ad e1) Y on F_R^3, basis e1..e4.
    t, x2, x3, x4 = sp.symbols("t x2 x3 x4")
    ad = sp.zeros(4, 4)
    ad[2, 1] = 1  # [e1,e2]=e3
    ad[3, 2] = 1  # [e1,e3]=e4
    result = (-t * ad).exp() * sp.Matrix([0, x2, x3, x4])
    return [sp.expand(v) for v in result]


def shear_antiderivatives(h, count):
    x, s = sp.symbols("x s")
    out = [h(x)]
    for _ in range(count - 1):
        prev = out[-1]
        out.append(sp.expand(-sp.integrate(prev.subs(x, s), (s, 0, x))))
    return out


def graded_auto_inverse():
    a1, a2, b, c1, c2, d = sp.symbols("a1 a2 b c1 c2 d", nonzero=True)
    # h(e1)=a1 e1 + b e2, h(e2)=a2 e2 restricted to V1 (columns are images).
    h = sp.Matrix([[a1, 0], [b, a2]])
    g = sp.Matrix([[c1, 0], [d, c2]])
    sol = sp.solve(list(h * g - sp.eye(2)), [c1, c2, d], dict=True)[0]
    return sol


def unit_square_alpha(samples_per_segment=2000):
    # Heisenberg: [x e1 + y e2, x' e1 + y' e2] = (x y' - y x') e3.
    verts = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
    total = 0.0
    for (ax, ay), (bx, by) in zip(verts, verts[1:]):
        dx, dy = bx - ax, by - ay
        for k in range(samples_per_segment):
            s = (k + 0.5) / samples_per_segment
            cx, cy = ax + s * dx, ay + s * dy
            total += (cx * dy - cy * dx) / samples_per_segment
    return total


def morera_wbar_unit_square(samples_per_segment=20000):
    verts = [0, 1, 1 + 1j, 1j, 0]
    total = 0j
    for a, b in zip(verts, verts[1:]):
        d = b - a
        for k in range(samples_per_segment):
            w = a + (k + 0.5) / samples_per_segment * d
            total += w.conjugate() * d / samples_per_segment
    return total


def regular_polygon_perimeter_for_unit_area(n):
    return math.sqrt(4 * n * math.tan(math.pi / n))


if __name__ == "__main__":
    c = bch_tail_coefficients(8)
    print("BCH tail coefficients c_j (j=0..8):", {j: str(v) for j, v in c.items()})
    print("F_R^3 conjugation:", conjugation_f3())
    print("shear h(x)=x antiderivatives h2..h4:", shear_antiderivatives(lambda x: x, 3))
    print("graded auto inverse:", graded_auto_inverse())
    print("unit square alpha integral (midpoint quadrature):", unit_square_alpha())
    print("morera wbar unit square (midpoint):", morera_wbar_unit_square())
    print("2 sqrt(pi) =", 2 * math.sqrt(math.pi))
    print("64-gon perimeter at unit area =", regular_polygon_perimeter_for_unit_area(64))
    print("256-gon area / (pi rho^2) =", 256 / 2 * math.sin(2 * math.pi / 256) / math.pi)
