"""Independent values for s-perimeters in the plane.

Kernel masses are written as angular integrals of closed-form ray
lengths: the mass of K = c |z|^{-2-s} beyond distance t along a ray is
c t^{-s} / s. Outer integrals use scipy adaptive quadrature.

Usage: python3 perimeter_oracle.py
"""
from math import atan2, cos, gamma, pi, sin, sqrt

from scipy import integrate

TOL = dict(epsabs=1e-13, epsrel=1e-12, limit=400)


def c_ns(n, s):
    return 2 ** (2 + 2 * s) * gamma((n + s) / 2) / (pi ** (n / 2) * gamma(2 - s)) * s * (1 - s)


def circle_exit(x, y, th):
    # distance from (x, y) inside the unit circle to the circle along direction th
    b = x * cos(th) + y * sin(th)
    return -b + sqrt(b * b + 1 - x * x - y * y)


def per_ball(s):
    """Per_s(B_1) = int_{B_1} mass of B_1^c."""
    c = c_ns(2, s)

    def inner(rho):
        f = lambda th: circle_exit(rho, 0.0, th) ** (-s)
        v, _ = integrate.quad(f, 0, pi, **TOL)
        return 2 * v * c / s

    v, _ = integrate.quad(lambda r: 2 * pi * r * inner(r), 0, 1, **TOL)
    return v


def per_halfplane_in_disk(s):
    """E = {y < 0}, Omega = B_1: Per = int over the lower half disk of
    mass(E^c) + mass(E^c \\ B_1), using the reflection symmetry."""
    c = c_ns(2, s)
    half_plane = integrate.quad(lambda th: sin(th) ** s, 0, pi, **TOL)[0]

    def m(x, y):
        d = -y
        f = lambda th: max(d / sin(th), circle_exit(x, y, th)) ** (-s)
        # kinks: rays through the contact points (+-1, 0)
        pts = [a for a in (atan2(-y, sx - x) for sx in (-1.0, 1.0)) if 0 < a < pi]
        v, _ = integrate.quad(f, 0, pi, points=sorted(pts) or None, **TOL)
        return c / s * (v + half_plane * d ** (-s))

    def over_x(y):
        w = sqrt(1 - y * y)
        v, _ = integrate.quad(lambda x: m(x, y), -w, w, **TOL)
        return v

    v, _ = integrate.quad(over_x, -1, 0, **TOL)
    return v


# Output of this script, frozen in tests/test_perimeter.cpp:
# per_ball s=0.3: 33.7872064599714
# per_ball s=0.5: 40.4540572475264
# per_ball s=0.7: 47.4186268589031
# per_halfplane_in_disk s=0.2: 14.1706408286081
# per_halfplane_in_disk s=0.5: 16.6685449072305
# per_halfplane_in_disk s=0.8: 18.3167567659312

if __name__ == "__main__":
    for s in (0.3, 0.5, 0.7):
        print(f"per_ball s={s}: {per_ball(s):.15g}")
    for s in (0.2, 0.5, 0.8):
        print(f"per_halfplane_in_disk s={s}: {per_halfplane_in_disk(s):.15g}")
