#!/usr/bin/env python3
"""Arbitrary-precision Airy reference values.

Prints frozen golden values used by tests/test_specfun.cpp.  mpmath's airyai/
airybi are computed from the hypergeometric power series with adaptive
precision, which is an independent route from the double-precision
series/ODE-stepping/asymptotic implementation under test.
"""
import mpmath as mp

mp.mp.dps = 40

POINTS = [0.0, 1e-4, 0.5, -0.5, 1.0, -1.0, 2.5, -2.5, 3.5999, 3.6001,
          4.2, 5.0, -5.0, 6.5, 7.9999, 8.0001, 8.9999, 9.0001, 10.0, -10.0,
          -4.7999, -4.8001, -7.5, -11.9999, -12.0001, -15.0, 12.0, 20.0,
          -20.0, 40.0, -50.0, 90.0, -200.0]


def fmt(v):
    return mp.nstr(v, 22)


def main():
    print("// x, Ai, Ai', Bi, Bi'")
    for x in POINTS:
        xm = mp.mpf(x)
        row = [mp.airyai(xm), mp.airyai(xm, 1), mp.airybi(xm), mp.airybi(xm, 1)]
        print("{%s, %s, %s, %s, %s}," % tuple([fmt(mp.mpf(x))] + [fmt(v) for v in row]))

    print()
    print("// scaled goldens: x, Ai*e^xi, Ai'*e^xi, Bi*e^-xi, Bi'*e^-xi")
    for x in [10.0, 25.0, 60.0, 104.0, 150.0, 200.0]:
        xm = mp.mpf(x)
        xi = mp.mpf(2) / 3 * xm ** mp.mpf(1.5)
        row = [mp.airyai(xm) * mp.e**xi, mp.airyai(xm, 1) * mp.e**xi,
               mp.airybi(xm) * mp.e**-xi, mp.airybi(xm, 1) * mp.e**-xi]
        print("{%s, %s, %s, %s, %s}," % tuple([fmt(mp.mpf(x))] + [fmt(v) for v in row]))

    print()
    print("// ci(4) = Bi(4) + i Ai(4), derivative")
    x = mp.mpf(4)
    print("Bi(4)   =", fmt(mp.airybi(x)))
    print("Ai(4)   =", fmt(mp.airyai(x)))
    print("Bi'(4)  =", fmt(mp.airybi(x, 1)))
    print("Ai'(4)  =", fmt(mp.airyai(x, 1)))
    print()
    print("Ai(0)   =", fmt(mp.airyai(mp.mpf(0))))
    print("Ai'(0)  =", fmt(mp.airyai(mp.mpf(0), 1)))
    print("Bi(0)   =", fmt(mp.airybi(mp.mpf(0))))
    print("Bi'(0)  =", fmt(mp.airybi(mp.mpf(0), 1)))
    print("check 3^{-2/3}/Gamma(2/3) =", fmt(mp.mpf(3)**mp.mpf(-2.0/3)/mp.gamma(mp.mpf(2)/3)))
    print("check 3^{-1/6}/Gamma(2/3) =", fmt(mp.mpf(3)**(-mp.mpf(1)/6)/mp.gamma(mp.mpf(2)/3)))


if __name__ == "__main__":
    main()
