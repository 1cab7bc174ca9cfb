"""D(0) = d0 I for the default bump at d = 4 from the Fourier form.

d0 = pi / (2 pi)^d / sqrt(2 pi) * S_{d-1} / d * int_0^inf k^d |Phi_hat(k)|^2 dk
with Phi_hat from the Hankel transform of A (1 - r^2/R^2)^p.
"""
import mpmath as mp

mp.mp.dps = 30
d, A, R, p = 4, 1, 1, 4


def phi_hat(k):
    if k == 0:
        return mp.quad(lambda r: 2 * mp.pi**2 * r**3 * A * (1 - r**2) ** p, [0, R])
    nu = mp.mpf(d) / 2 - 1
    f = lambda r: r ** (d / 2) * mp.besselj(nu, k * r) * A * (1 - (r / R) ** 2) ** p
    return (2 * mp.pi) ** (d / 2) * k ** (1 - d / 2) * mp.quad(f, [0, R])


# closed form: (1 - r^2)^p Hankel gives Bessel J_{d/2+p}(k)/k^{d/2+p} times constants
def phi_hat_closed(k):
    nu = mp.mpf(d) / 2 + p
    return A * (2 * mp.pi) ** (d / 2) * 2**p * mp.factorial(p) * mp.besselj(nu, k) / k**nu


area = 2 * mp.pi ** (mp.mpf(d) / 2) / mp.gamma(mp.mpf(d) / 2)
moment = mp.quad(lambda k: k**d * phi_hat_closed(k) ** 2, mp.linspace(0, 400, 401))
d0 = mp.pi / (2 * mp.pi) ** d / mp.sqrt(2 * mp.pi) * area / d * moment
print("phi_hat(0) =", phi_hat(0), "pi^2/30 =", mp.pi**2 / 30)
print("check closed vs quad at k=3:", phi_hat(3), phi_hat_closed(3))
print("moment =", moment)
print("d0 =", d0)
