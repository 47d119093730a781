"""Independent oracle values frozen into the C++ tests.

Everything here uses closed forms, mpmath root finding and quadrature;
none of it shares code with the library.
"""
import mpmath as mp

mp.mp.dps = 30


def jost_well(value, width, k):
    """Jost function of a constant well V=value on [0,width]."""
    k = mp.mpc(k)
    kappa = mp.sqrt(k * k - value)
    ew = mp.exp(1j * k * width)
    if abs(kappa) < mp.mpf('1e-20'):
        return ew * (1 - 1j * k * width)
    return ew * (mp.cos(kappa * width) - 1j * k / kappa * mp.sin(kappa * width))


def main():
    a = 1 / mp.log(2)
    print("moment exp weight (e^a-1)/a         =", (mp.e ** a - 1) / a)
    X = mp.findroot(lambda X: (2 + X) * mp.exp(-X) - mp.mpf('1e-8'), 20)
    print("truncation radius -e^-x tol 1e-8     =", X)
    print("jost well -4, k=i, x=0               =", jost_well(-4, 1, 1j))
    kap = mp.sqrt(4.25)
    print("regular well -4 k=.5 x=1 sin(k)/k    =", mp.sin(kap) / kap, " kappa", kap)
    g = mp.findroot(lambda g: mp.sqrt(4 - g * g) * mp.cot(mp.sqrt(4 - g * g)) + g, 1.04)
    print("bound state gamma depth 4            =", g, " lambda", -g * g)
    print("Rtilde(0) depth 1                    =", 1 / mp.log(2))
    print("Rtilde(1/2) depth 1                  =", (mp.sqrt(2) * 2 / 3 / mp.log(2)) ** 2)
    # theorem 1, well -1 on [0,1], a=1, alpha=beta=0, A=10, R = Rtilde(0)
    Rt = 1 / mp.log(2)
    A = 10
    mom = 1 + (mp.e - 1)
    val = (mom - mp.log(2 - 2 ** (Rt / A))) / mp.log((A + 0.5) / mp.sqrt(A * A + Rt * Rt))
    print("theorem1 well -1 a=1 a=b=0 A=10      =", val)
    Rt4 = 4 / mp.log(2)
    mom4 = 4 * mom
    val4 = (mom4 - mp.log(2 - 2 ** (Rt4 / A))) / mp.log((A + 0.5) / mp.sqrt(A * A + Rt4 * Rt4))
    print("theorem1 well -4 a=1 a=b=0 A=10      =", val4, " admissible needs A >", max(Rt4, Rt4**2 - 0.25))
    A = 40
    val4 = (mom4 - mp.log(2 - 2 ** (Rt4 / A))) / mp.log((A + 0.5) / mp.sqrt(A * A + Rt4 * Rt4))
    print("theorem1 well -4 a=1 a=b=0 A=40      =", val4)
    b = 1 / mp.log(2)
    print("corollary2 well -1                   =", 10 * (1 + 2 / b * (mp.e ** b - 1) / b))
    print("free kernel k=i x=1 xi=2             =", mp.sinh(1) * mp.exp(-2))
    # well -4, k=2i, x=0.3, xi=0.7: s(0.3) e(0.7) / e(k)
    # kappa = sqrt(k^2 + 4) vanishes at k = 2i: sin(kappa t)/kappa -> t
    k = 2j
    s03 = mp.mpf('0.3')
    e1, de1 = mp.exp(1j * k), 1j * k * mp.exp(1j * k)
    e07 = e1 - de1 * mp.mpf('0.3')
    print("well -4 kernel k=2i x=.3 xi=.7       =", s03 * e07 / jost_well(-4, 1, k))
    # s(1,2+i) for well -4
    k = 2 + 1j
    kappa = mp.sqrt(k * k + 4)
    print("|s(1,2+i)| well -4                   =", abs(mp.sin(kappa) / kappa), " bound", mp.e ** 3)
    # threshold depth
    print("threshold pi^2/4                     =", mp.pi ** 2 / 4)

    # Lemma 3 HS oracle, well -1 on [0,1], a=b=1 on [0,1]:
    # HS^2 = int_0^1 |e(x)|^2 int_0^x |s|^2 + |s(x)|^2 int_x^1 |e|^2
    def hs(kv, value=-1):
        k = mp.mpc(kv)
        kappa = mp.sqrt(k * k - value)
        s = lambda x: mp.sin(kappa * x) / kappa
        e1 = mp.exp(1j * k)
        de1 = 1j * k * e1
        e = lambda x: e1 * mp.cos(kappa * (1 - x)) - de1 * mp.sin(kappa * (1 - x)) / kappa
        inner = lambda x: (abs(e(x)) ** 2 * mp.quad(lambda t: abs(s(t)) ** 2, [0, x]) +
                           abs(s(x)) ** 2 * mp.quad(lambda t: abs(e(t)) ** 2, [x, 1]))
        return mp.sqrt(mp.quad(inner, [0, 1]))
    for kv in [1.5j, 0.5 + 0.5j, 2 + 0.1j]:
        print("HS well -1 indicator k=%s          =" % kv, hs(kv), " bound C/2 =", mp.exp(0.5) / 2)


if __name__ == "__main__":
    main()
