#!/usr/bin/env python3
"""Reference values for the deterministic-computing AoI evaluators.

Independent of the C++ implementation: the M/D/1 survival function is the
alternating Franx sum evaluated in 120-digit arithmetic, and expectations
over the waiting time use integration by parts, E[psi(W)] = psi(0) +
int S_W(w) psi'(w) dw, so neither the density nor the residue expansion
is involved.

Usage: python3 md1_aoi_oracle.py   (rewrites remote_det.inc and partial_det.inc)
"""
from mpmath import mp, mpf, exp, floor, factorial, quad

mp.dps = 25


def md1_survival(x, rho):
    """1 - F(x) in units of the service time."""
    with mp.workdps(140):
        x = mpf(x)
        rho = mpf(rho)
        total = mpf(0)
        for k in range(int(floor(x)) + 1):
            total += rho**k / factorial(k) * (k - x) ** k * exp(rho * (x - k))
        return +(1 - (1 - rho) * total)


def breakpoints(lo, hi, step):
    pts = [lo]
    k = int(lo / step) + 1
    while k * step < hi:
        pts.append(k * step)
        k += 1
    pts.append(hi)
    return pts


def aoi_two_stage(mu_l, mu_t, mu_s, mu_arr, mu_srv):
    """AoI = (E[B W'] + d E[B] + E[B]^2 + E[B^2]/2) / E[B] with B = a + Y,
    a = 1/mu_l (0 for remote), d = 1/mu_s, Y ~ Exp(mu_t), and
    W' = ((W + d - b)^+ + d - B')^+ given B = b, where W follows the
    M/D/1(mu_arr, mu_srv) law and B' is an independent copy of B.

    E_W[psi_b(W)] = psi_b(0) + int_{(b-d)^+} S_W(w) h'(w + 2d - b) dw with
    h(z) = E[(z - B')^+]. Swapping the b and w integrals leaves one outer
    integral over w whose inner integral is elementary (requires a <= d)."""
    mu_t = mpf(mu_t)
    d = 1 / mpf(mu_s)
    a = mpf(0) if mu_l is None else 1 / mpf(mu_l)
    assert a <= d
    rho = mpf(mu_arr) / mpf(mu_srv)
    srv = mpf(mu_srv)

    w_hi = mpf(1)
    while md1_survival(w_hi * srv, rho) > mpf("1e-20"):
        w_hi *= 1.25

    def f_b(b):
        return mu_t * exp(-mu_t * (b - a))

    def h(z):
        u = z - a
        return u - (1 - exp(-mu_t * u)) / mu_t if u > 0 else mpf(0)

    def h_prime(z):
        u = z - a
        return 1 - exp(-mu_t * u) if u > 0 else mpf(0)

    # psi_b(0) term, kink at b = d.
    tail = a + 60 / mu_t
    atom = quad(lambda b: b * f_b(b) * h(max(mpf(0), d - b) + d), sorted({a, max(a, d), tail}))

    def inner(w):  # int_a^{w+d} b f_B(b) h'(w + 2d - b) db
        hi = w + d
        if hi <= a:
            return mpf(0)
        return quad(lambda b: b * f_b(b) * h_prime(w + 2 * d - b), [a, hi])

    cont = quad(lambda w: md1_survival(w * srv, rho) * inner(w), breakpoints(mpf(0), w_hi, 1 / srv))
    e_bw = atom + cont
    eb = a + 1 / mu_t
    eb2 = 1 / mu_t**2 + eb**2
    return (e_bw + d * eb + eb**2 + eb2 / 2) / eb


def remote(mu_t, mu_s):
    return aoi_two_stage(None, mu_t, mu_s, mu_t, mu_s)


def partial(mu_l, mu_t, mu_s):
    mu = mpf(mu_l) * mu_s / (mpf(mu_l) - mu_s)
    return aoi_two_stage(mu_l, mu_t, mu_s, mu_t, mu)


if __name__ == "__main__":
    import pathlib

    here = pathlib.Path(__file__).parent
    rows = [f"{{{mt}, {ms}, {mp.nstr(remote(mt, ms), 15)}}},"
            for mt, ms in [(0.5, 1), (0.2, 1), (0.8, 1), (1.5, 2)]]
    (here / "remote_det.inc").write_text("\n".join(rows) + "\n")
    rows = [f"{{{ml}, {mt}, {ms}, {mp.nstr(partial(ml, mt, ms), 15)}}},"
            for ml, mt, ms in [(2, 0.5, 1), (3, 1, 1), (1.5, 2, 1), (4, 1, 3)]]
    (here / "partial_det.inc").write_text("\n".join(rows) + "\n")
