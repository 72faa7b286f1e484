"""Independent high-precision oracles for values frozen into the C++ tests.

Run with: python3 tests/oracles/frozen_values.py
"""
import mpmath as mp

mp.mp.dps = 50


def li_near_one(s, mu, terms=80):
    # Li_s(e^{-mu}) for non-integer s and |mu| < 2*pi.
    tot = mp.gamma(1 - s) * mu ** (s - 1)
    for n in range(terms):
        tot += mp.zeta(s - n) * (-mu) ** n / mp.factorial(n)
    return tot


def zipf_deficit(alpha, x):
    # p_k = A k^{-alpha-1}, k >= 1, A = 1/zeta(alpha)
    A = 1 / mp.zeta(alpha)
    mu = -mp.log(1 - x)
    return A * (li_near_one(alpha + 1, mu) - mp.zeta(alpha + 1) + x * mp.zeta(alpha))


def mu_integral_atom(alpha, t1, t2, x):
    return mp.quad(lambda u: alpha * u ** (-alpha - 1) * mp.exp(-x * t2 * u), [1 / t1, 10 / t1, mp.inf])


def c_alpha_mu(alpha, c1, atoms):
    phi = lambda x: c1 * alpha * mp.gamma(-alpha) * x ** alpha - sum(
        w * mu_integral_atom(alpha, a, b, x) for (a, b), w in atoms if a > 0)
    return mp.findroot(phi, (mp.mpf("0.01"), mp.mpf(10)), solver="anderson")


def geometric_partial(x, r):
    # sum_{k>r} 2^{-(k+1)} (1-x)^k
    return mp.nsum(lambda k: mp.mpf(2) ** (-(k + 1)) * (1 - x) ** k, [r + 1, mp.inf])


def geometric_xr(r, iters=4000):
    # P(M <= r) for the diagonal geometric law is the limit of y <- sum_{k<=r} 2^{-(k+1)} y^k from y = 0.
    y = mp.mpf(0)
    for _ in range(iters):
        y = sum(mp.mpf(2) ** (-(k + 1)) * y ** k for k in range(int(r) + 1))
    return 1 - y


def spectral_truncated_pgf(alpha, atoms, q, r0, x, r):
    # q * sum_i w_i * E[(1-x)^floor(R theta2); R theta1 > r], R = r0 * Pareto(alpha),
    # summed over the integer values of floor(R theta2).
    G = lambda t: mp.mpf(1) if t <= r0 else (r0 / t) ** alpha
    total = mp.mpf(0)
    for (t1, t2), w in atoms:
        lo = max(r0, r / t1)
        if t2 == 0:
            total += w * G(lo)
            continue
        k0 = int(mp.floor(lo * t2))
        head = (G(lo) - G((k0 + 1) / t2)) * (1 - x) ** k0
        tail = mp.nsum(lambda k: (G(k / t2) - G((k + 1) / t2)) * (1 - x) ** k, [k0 + 1, mp.inf])
        total += w * (head + tail)
    return q * total


if __name__ == "__main__":
    print("zipf1.5 deficit x=1e-3:", mp.nstr(zipf_deficit(mp.mpf("1.5"), mp.mpf("1e-3")), 20))
    print("zipf1.5 deficit x=1e-6:", mp.nstr(zipf_deficit(mp.mpf("1.5"), mp.mpf("1e-6")), 20))
    print("zipf1.5 deficit x=0.3:", mp.nstr(zipf_deficit(mp.mpf("1.5"), mp.mpf("0.3")), 20))
    print("zipf2 deficit x=1e-5:", mp.nstr(zipf_deficit(mp.mpf("2.0000000000001"), mp.mpf("1e-5")), 12))
    print("zipf1.5 p0:", mp.nstr(1 - mp.zeta(2.5) / mp.zeta(1.5), 20))
    print("zipf1.5 c:", mp.nstr(1 / mp.zeta(1.5) / 1.5, 20))
    print("zipf2 c:", mp.nstr(1 / mp.zeta(2) / 2, 20))
    a = mp.mpf("1.5")
    print("Gamma(-1.5):", mp.nstr(mp.gamma(-a), 20))
    print("mu_int diag x=1:", mp.nstr(mu_integral_atom(a, 1, 1, 1), 20))
    print("mu_int (0.5,1) x=0.7:", mp.nstr(mu_integral_atom(a, mp.mpf("0.5"), 1, mp.mpf("0.7")), 20))
    print("C_1.5 diag:", mp.nstr(c_alpha_mu(a, 1, [((1, 1), 1)]), 20))
    print("C_1.5 two-atom:", mp.nstr(c_alpha_mu(a, 1, [((1, 1), 0.5), ((0, 1), 0.5)]), 20))
    print("C_1.2 diag:", mp.nstr(c_alpha_mu(mp.mpf("1.2"), 1, [((1, 1), 1)]), 20))
    print("geom partial x=0.5 r=2:", mp.nstr(geometric_partial(mp.mpf("0.5"), 2), 20))
    for r in (3, 5, 10):
        print("geometric x_%d:" % r, mp.nstr(geometric_xr(r), 20))
    spec = [((1, mp.mpf("0.5")), mp.mpf("0.6")), ((mp.mpf("0.4"), 1), mp.mpf("0.4"))]
    print("spectral truncated pgf x=0.01 r=7:",
          mp.nstr(spectral_truncated_pgf(a, spec, mp.mpf("0.25"), 1, mp.mpf("0.01"), 7), 20))
    print("spectral truncated pgf x=0.2 r=0.5:",
          mp.nstr(spectral_truncated_pgf(a, spec, mp.mpf("0.25"), 1, mp.mpf("0.2"), mp.mpf("0.5")), 20))
