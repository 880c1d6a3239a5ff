"""Independent reference values for the unit tests (scipy / numpy).

Each quantity is computed from its textbook definition with a numerical
method different from the library's: scipy QUADPACK, dblquad, fixed
Gauss-Legendre tensor grids, and closed-form geometry.
"""
import numpy as np
from math import pi, sin, sqrt, exp, acos, asin
from scipy import integrate, special, optimize


def K(z, b):
    return 2 * pi / b * z ** (2 / b) / sin(2 * pi / b)


def rho(T, b):
    # Interference-to-signal Laplace exponent for nearest-BS association.
    if T == 0:
        return 0.0
    lo = T ** (-2 / b)
    tail = integrate.quad(lambda u: 1 / (1 + u ** (b / 2)), lo, np.inf, limit=400)[0]
    return T ** (2 / b) * tail


def tau1(lam, b, s2):
    if s2 == 0:
        cover = lambda x: 1 / (1 + rho(np.expm1(x), b))
        return integrate.quad(cover, 0, np.inf, limit=400, epsabs=1e-12, epsrel=1e-10)[0]

    # With noise: outer v = r^2, inner x = log(1 + T).
    def inner(v):
        f = lambda x: exp(-pi * lam * v * rho(np.expm1(x), b) - np.expm1(x) * s2 * v ** (b / 2))
        return integrate.quad(f, 0, np.inf, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    return integrate.quad(lambda v: pi * lam * exp(-pi * lam * v) * inner(v), 0, np.inf,
                          limit=400, epsabs=1e-13, epsrel=1e-11)[0]


def tau2_approx(u, lam, b):
    f = lambda z: exp(-pi * lam * u * u / (1 + 1 / K(z, b))) / ((1 + z) * (1 + K(z, b))) if z > 0 else 1.0
    return integrate.quad(f, 0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-11)[0]


def lens_excess(l, r, t):
    # Area of disk(E=(l,0), w) outside disk(O, r), w = |E - X|, X = r e^{it}.
    w = sqrt(l * l + r * r - 2 * l * r * np.cos(t))
    d = l
    if w == 0:
        return 0.0
    if d >= r + w:
        inter = 0.0
    elif d <= abs(r - w):
        inter = pi * min(r, w) ** 2
    else:
        a1 = acos((d * d + w * w - r * r) / (2 * d * w))
        a2 = acos((d * d + r * r - w * w) / (2 * d * r))
        inter = w * w * a1 + r * r * a2 - 0.5 * sqrt((-d + w + r) * (d + w - r) * (d - w + r) * (d + w + r))
    return pi * w * w - inter


def N2(l, lam):
    f = lambda r, t: r * exp(-lam * pi * r * r) * (-np.expm1(-lam * lens_excess(l, r, t)))
    return 2 * lam * integrate.dblquad(f, 0, pi, 0, 8 / sqrt(lam), epsabs=1e-12, epsrel=1e-10)[0]


def curvature(b):
    return integrate.quad(lambda z: K(z, b) / ((1 + z) * (1 + K(z, b)) ** 2), 0, np.inf, limit=500,
                          epsabs=1e-13, epsrel=1e-11)[0]


def s_closed(b, C):
    return (15 - pi ** 2) / (4 * pi ** 2) * C / curvature(b)


def mean_gauss_data(l, lam, b):
    def f(z):
        k = K(z, b)
        x = sqrt(pi * lam * k / (1 + k)) * l
        avg = 1.0 if x < 1e-8 else sqrt(pi) * special.erf(x) / (2 * x)
        return avg / ((1 + z) * (1 + k))
    return integrate.quad(f, 0, np.inf, limit=500, epsabs=1e-13, epsrel=1e-11)[0]


def q_tilde(s, v, lam, b, C):
    return mean_gauss_data(s * v, lam, b) - C / s * N2(s * v, lam)


def q2_det_refined(s, l, lam, b, C, eps):
    t1 = tau1(lam, b, 0)
    total = 0.0
    for t in range(s):
        u = l * t / s
        w = exp(-eps * u)
        total += w * t1 + (1 - w) * tau2_approx(u, lam, b)
    return (total - C * N2(l, lam)) / s


def gl(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def tau2_bruteforce(u, lam, b):
    """Stale-association rate by fixed tensor Gauss-Legendre grids.

    E[log(1+SINR)] = int_0^inf P(SINR > e^x - 1) dx with the serving BS at
    polar (r, theta) from the start point and interferers a PPP outside
    disk(0, r). The excluded-disk Laplace term is a 2-D integral in polar
    coordinates about the UE, with no tail-function reduction.
    """
    c_full = (pi / b) / sin(2 * pi / b)
    th, wth = gl(32, 0, pi)
    r1, w1 = gl(28, 0, u)
    r2, w2 = gl(56, u, 4.5 / sqrt(pi * lam))
    rr = np.concatenate([r1, r2])
    wr = np.concatenate([w1, w2])
    parts = [gl(40, 0, 3), gl(24, 3, 14), gl(40, 14, 80)]
    xs = np.concatenate([p[0] for p in parts])
    wx = np.concatenate([p[1] for p in parts])
    z = np.expm1(xs)
    sq, wsq = gl(48, 0, 1)
    total = 0.0
    for j, r in enumerate(rr):
        if u < r:
            ph, wph = gl(96, 0, 2 * pi)
            lo = np.zeros_like(ph)
            hi = -u * np.cos(ph) + np.sqrt(r * r - u * u * np.sin(ph) ** 2)
        else:
            a = asin(r / u)
            ps, wps = gl(96, -pi / 2, pi / 2)
            ph = pi + a * np.sin(ps)
            wph = wps * a * np.cos(ps)
            disc = np.sqrt(np.maximum(r * r - u * u * np.sin(ph) ** 2, 0))
            lo = -u * np.cos(ph) - disc
            hi = -u * np.cos(ph) + disc
        rho_nodes = lo[:, None] + (hi - lo)[:, None] * sq[None, :]
        weights = wph[:, None] * (hi - lo)[:, None] * wsq[None, :]
        for i, t in enumerate(th):
            w2 = u * u + r * r - 2 * u * r * np.cos(t)
            c = z * w2 ** (b / 2)
            full = 2 * pi * c ** (2 / b) * c_full
            f = rho_nodes[None] * c[:, None, None] / (rho_nodes[None] ** b + c[:, None, None])
            excl = np.tensordot(f, weights, axes=([1, 2], [0, 1]))
            total += wth[i] * wr[j] * r * exp(-lam * pi * r * r) * np.sum(wx * np.exp(-lam * (full - excl)))
    return 2 * lam * total


if __name__ == "__main__":
    print("tau1 lambda=1 beta=4 s2=0", repr(tau1(1, 4, 0)))
    print("tau1 lambda=3 beta=3 s2=0", repr(tau1(3, 3, 0)))
    print("tau1 lambda=1 beta=4 s2=1", repr(tau1(1, 4, 1)))
    print("tau2_approx u=0.3 lambda=3 beta=3", repr(tau2_approx(0.3, 3, 3)))
    print("tau2_approx u=0 beta=4", repr(tau2_approx(0.0, 1, 4)))
    for g in [(1, 1, pi / 2), (0.5, 1, 1.0), (2, 1, 2.5), (0.3, 0.2, 0.4), (1, 2, 3.0)]:
        print("excess_area", g, repr(lens_excess(*g)))
    print("N2 l=0.5 lambda=3", repr(N2(0.5, 3)))
    print("N2 l=0.25 lambda=1", repr(N2(0.25, 1)))
    for b in (3, 4, 5):
        print("curvature beta=%g" % b, repr(curvature(b)))
    print("s_closed beta=4 C=50", repr(s_closed(4, 50)))
    r = optimize.minimize_scalar(lambda s: -q_tilde(s, 0.005, 5, 4, 50), bounds=(3, 20), method="bounded",
                                 options={"xatol": 1e-4})
    print("s_numeric v=0.005 lambda=5 beta=4 C=50", repr(r.x))
    print("q_tilde s=10 v=0.004 lambda=3 beta=3 C=30", repr(q_tilde(10, 0.004, 3, 3, 30)))
    print("q2 det refined s=50 l=0.15 lambda=5 beta=4 C=30 eps=10", repr(q2_det_refined(50, 0.15, 5, 4, 30, 10)))
    print("tau2 bruteforce u=0.3 lambda=3 beta=3", repr(tau2_bruteforce(0.3, 3, 3)))
    print("tau2 bruteforce u=0.1 lambda=1 beta=4", repr(tau2_bruteforce(0.1, 1, 4)))
