"""Independent high-precision oracle for the frozen dispersion goldens.

Evaluates the on-axis induced-potential series with mpmath's Legendre
functions (hypergeometric route, no recurrences) and differentiates the
axis kernel numerically with mpmath.diff. Run: python3 derive_goldens.py
"""
import mpmath as mp

mp.mp.dps = 40
KC = mp.mpf("1.602176634e-19") / (4 * mp.pi * mp.mpf("8.8541878128e-12")) * mp.mpf("1e9")  # eV nm


def ratios(c, nmax=None):
    xi = mp.acosh(c)
    if nmax is None:
        nmax = int(45 / xi) + 5
    out = []
    for n in range(nmax + 1):
        nu = n - mp.mpf(1) / 2
        out.append(mp.re(mp.legenq(nu, 0, c, type=3)) / mp.legenp(nu, 0, c, type=3))
    return out


def phi_axis(z, zp, f, w):
    # induced potential (units of q/(4 pi eps0), 1/nm) on axis, source on axis
    th, thp = mp.acot(z / f) if z != 0 else mp.pi / 2, mp.acot(zp / f) if zp != 0 else mp.pi / 2
    if th < 0:
        th += mp.pi
    if thp < 0:
        thp += mp.pi
    s = sum((1 if n == 0 else 2) * mp.cos(2 * n * (th - thp)) * w[n] for n in range(len(w)))
    return -(2 * mp.sin(th) * mp.sin(thp)) / (mp.pi * f) * s


def mixed(z, zp, f, w):
    return mp.diff(lambda x, y: phi_axis(x, y, f, w), (z, zp), (1, 1))


def u_nr(zp, a, b, d2z=1, w=None):
    f = mp.sqrt(a * a - b * b)
    w = w or ratios(mp.mpf(a) / b)
    return d2z * KC / 2 * mixed(zp, zp, f, w)


def force(zp, a, b, w=None):
    w = w or ratios(mp.mpf(a) / b)
    return -mp.diff(lambda x: u_nr(x, a, b, 1, w), zp)


if __name__ == "__main__":
    a, b = mp.mpf(5), mp.mpf(1)
    w = ratios(a / b)
    for z in [0, 1, 2, 5]:
        print("U_NR a=5 b=1 z=%s" % z, mp.nstr(u_nr(mp.mpf(z), a, b, 1, w), 17))
    f = mp.sqrt(a * a - b * b)
    print("mixed G_H a=5 b=1 z=z'=2", mp.nstr(mixed(2, 2, f, w) / (4 * mp.pi), 17))
    zs = mp.findroot(lambda z: force(z, a, b, w), 3)
    print("z* a=5 b=1", mp.nstr(zs, 17))
    for zp in [1, 2, 3]:
        g = lambda r: force(mp.mpf(zp), r * 1, mp.mpf(1))
        lo, hi = mp.mpf("1.01"), mp.mpf(1000)
        for _ in range(45):
            mid = (lo + hi) / 2
            if g(mid) > 0:
                hi = mid
            else:
                lo = mid
        print("critical ratio zp=%d b=1" % zp, mp.nstr((lo + hi) / 2, 12))
