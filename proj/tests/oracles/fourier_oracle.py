"""Brute-force reference values for the Fourier/LP test suite.

Independent of the C++ implementation: plain enumeration with Fractions, and
scipy's HiGHS for the numeric LP optimum. The values it prints are frozen
into tests/unit/fourier_lp_test.cpp; run as a test it re-derives them and
checks the frozen copies below.
"""
from fractions import Fraction
from itertools import combinations, product
from math import comb

import numpy as np
from scipy.optimize import linprog


def fhat(table, z, n):
    N = 1 << n
    return Fraction(sum(table[x] * (-1) ** bin(x & z).count("1") for x in range(N)), N)


def tables(n):
    N = 1 << n
    for bits in range(1 << N):
        yield [(-1 if (bits >> x) & 1 else 1) for x in range(N)]


def naive_b(n):
    N = 1 << n
    tot = Fraction(0)
    for t in tables(n):
        tot += sum(fhat(t, z, n) ** 4 for z in range(N))
    return tot / (1 << N) * N


def k_coeff(n, S):
    N = 1 << n
    tot = Fraction(0)
    for t in tables(n):
        prod = 1
        for x in S:
            prod *= t[x]
        tot += fhat(t, 0, n) ** 2 * prod
    return Fraction(N, 1 << N) * tot


def half_hat(N, S):
    tot = 0
    for bits in range(1 << N):
        if bin(bits).count("1") != N // 2:
            continue
        prod = 1
        for x in S:
            prod *= -1 if (bits >> x) & 1 else 1
        tot += prod
    return Fraction(tot, 1 << N)


def lp_opt(n):
    N = 1 << n
    pairs = list(combinations(range(N), 2))
    A, b = [], []
    for t in tables(n):
        A.append([-t[x] * t[y] for x, y in pairs])
        b.append(1.0 / N)
    c = [-(2.0 / N)] * len(pairs)
    res = linprog(c, A_ub=np.array(A, float), b_ub=b, bounds=[(None, None)] * len(pairs), method="highs")
    return 1.0 / N - res.fun


FROZEN = {
    "naive_b": {1: Fraction(2), 2: Fraction(5, 2), 3: Fraction(11, 4)},
    "half_hat": {
        2: [Fraction(1, 2), Fraction(-1, 2)],
        4: [Fraction(3, 8), Fraction(-1, 8), Fraction(3, 8)],
        8: [Fraction(35, 128), Fraction(-5, 128), Fraction(3, 128), Fraction(-5, 128), Fraction(35, 128)],
    },
    "lp_opt": {1: 1.0, 2: 0.625, 3: 0.34375},
}


def check():
    for n, want in FROZEN["naive_b"].items():
        assert naive_b(n) == want, (n, naive_b(n))
    assert k_coeff(2, (0, 3)) == Fraction(1, 2)
    assert k_coeff(2, (0, 1, 2, 3)) == 0
    assert k_coeff(2, (1,)) == 0
    assert k_coeff(2, ()) == 1
    assert k_coeff(3, (1, 6)) == Fraction(1, 4)
    for N, want in FROZEN["half_hat"].items():
        assert [half_hat(N, tuple(range(2 * j))) for j in range(N // 2 + 1)] == want, N
    for n, want in FROZEN["lp_opt"].items():
        assert abs(lp_opt(n) - want) <= 1e-9, (n, lp_opt(n))
    t = [1, 1, 1, -1]
    assert format(sum((1 if v == -1 else 0) << (3 - x) for x, v in enumerate(t)), "x") == "1"
    assert fhat(t, 0, 2) == Fraction(1, 2)
    assert sum(Fraction(1, i) for i in range(1, 9)) / 8 == Fraction(761, 2240)
    print("all frozen reference values reproduced")


if __name__ == "__main__":
    check()
    for n in (1, 2, 3):
        print("naive_b", n, naive_b(n))
    print("k_S n=2 |S|=2", k_coeff(2, (0, 3)), " |S|=4", k_coeff(2, (0, 1, 2, 3)), " |S|=1", k_coeff(2, (1,)), " empty", k_coeff(2, ()))
    print("k_S n=3 |S|=2", k_coeff(3, (1, 6)), " |S|=3", k_coeff(3, (0, 1, 2)), " |S|=4", k_coeff(3, (0, 1, 2, 3)))
    for N in (2, 4, 8):
        print("half_hat N=%d" % N, [str(half_hat(N, tuple(range(2 * j)))) for j in range(N // 2 + 1)])
    for n in (1, 2, 3):
        print("lp_opt", n, repr(lp_opt(n)))
    # hex serialization example: n=2 table (+,+,+,-) -> bits 0001 with x=0 as MSB
    t = [1, 1, 1, -1]
    print("hex (+,+,+,-)", format(sum((1 if v == -1 else 0) << (3 - x) for x, v in enumerate(t)), "x"))
    print("fhat n=2 (+,+,+,-) z=00", fhat(t, 0, 2))
    print("H_8/8", sum(Fraction(1, i) for i in range(1, 9)) / 8, " H_16/16", float(sum(Fraction(1, i) for i in range(1, 17)) / 16))
