#!/usr/bin/env python3
"""Generate the embedded Hauptmodul coefficient tables (CSV, exponents -1..200).

Pure-integer power series arithmetic, independent of the Rust implementation.
Every series is normalized to q^-1 + 0 + O(q) and checked against published
low-order coefficients before anything is written to disk.

Two conventions:
  * plain power series: list `a` with a[i] = coefficient of q^i
  * T-storage: a Hauptmodul T = q^-1 + ... is stored as S = q*T,
    i.e. S[i] = coefficient of q^(i-1) in T

Formulas:
  1A: j - 744 with j = E4^3 / Delta
  2A: t + 4096/t + 24,           t = (eta(q)/eta(q^2))^24
  2B: t + 24
  3A: t + 729/t + 12,            t = (eta(q)/eta(q^3))^12
  4A: eta(q^2)^48/(eta(q)^24 eta(q^4)^24) - 24
  4B: sqrt(T_2A(q^2) + 104)      (half-period class: T(tau+1/2) = -T(tau))
  6A: s + 64/s + 6,              s = (eta(q)eta(q^3)/(eta(q^2)eta(q^6)))^6
"""

import os
from fractions import Fraction

N = 260          # working precision: q^0 .. q^(N-1)
EMIT_MAX = 200   # highest exponent written to the CSV files

OUT = os.path.join(os.path.dirname(__file__), "..",
                   "crates", "moonring", "src", "data", "hauptmodul")


def mul(a, b):
    out = [0] * N
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j >= N:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def pow_series(a, k):
    r = [0] * N
    r[0] = 1
    base = a[:]
    while k:
        if k & 1:
            r = mul(r, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return r


def inv(a):
    assert a[0] == 1, "inverse needs unit leading coefficient"
    out = [0] * N
    out[0] = 1
    for n in range(1, N):
        acc = 0
        for k in range(1, n + 1):
            if a[k]:
                acc += a[k] * out[n - k]
        out[n] = -acc
    return out


def subst(a, k):
    """a(q) -> a(q^k) for a plain power series."""
    out = [0] * N
    for i, ai in enumerate(a):
        if ai and i * k < N:
            out[i * k] = ai
    return out


def shift(a, d):
    """multiply by q^d (d >= 0)."""
    out = [0] * N
    for i, ai in enumerate(a):
        if ai and i + d < N:
            out[i + d] = ai
    return out


def euler_product(step):
    """prod_{n>=1} (1 - q^(step*n)) as a plain power series."""
    out = [0] * N
    out[0] = 1
    for n in range(step, N, step):
        for i in range(N - 1, n - 1, -1):
            out[i] -= out[i - n]
    return out


def sqrt_series(a):
    """Square root with leading 1; integrality asserted."""
    assert a[0] == 1
    out = [Fraction(0)] * N
    out[0] = Fraction(1)
    for n in range(1, N):
        acc = Fraction(0)
        for k in range(1, n):
            acc += out[k] * out[n - k]
        out[n] = (Fraction(a[n]) - acc) / 2
    res = []
    for x in out:
        assert x.denominator == 1, "square root is not integral"
        res.append(int(x))
    return res


def eisenstein_e4():
    e4 = [0] * N
    e4[0] = 1
    for n in range(1, N):
        e4[n] = 240 * sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
    return e4


def check(label, s, expected):
    """s is in T-storage: s[i] = coeff of q^(i-1)."""
    assert s[0] == 1, f"{label}: leading coefficient {s[0]}"
    assert s[1] == 0, f"{label}: constant term {s[1]}"
    for e, want in expected:
        got = s[e + 1]
        assert got == want, f"{label}: q^{e} = {got}, expected {want}"


def emit(label, s):
    path = os.path.join(OUT, f"{label.lower()}.csv")
    with open(path, "w") as f:
        f.write("n,coefficient\n")
        for e in range(-1, EMIT_MAX + 1):
            f.write(f"{e},{s[e + 1]}\n")
    print(f"wrote {path}")


def main():
    os.makedirs(OUT, exist_ok=True)

    P = {k: euler_product(k) for k in (1, 2, 3, 4, 6)}
    p1_24 = pow_series(P[1], 24)
    p2_24 = pow_series(P[2], 24)
    p4_24 = pow_series(P[4], 24)

    # ---- 1A ---------------------------------------------------------------
    e4 = eisenstein_e4()
    t1a = mul(pow_series(e4, 3), inv(p1_24))   # q*j as a power series
    t1a[1] -= 744
    check("1A", t1a, [(1, 196884), (2, 21493760), (3, 864299970)])

    # ---- 2B ---------------------------------------------------------------
    u2 = mul(p1_24, inv(subst(p1_24, 2)))      # q * (eta(q)/eta(q^2))^24
    t2b = u2[:]
    t2b[1] += 24
    check("2B", t2b, [(1, 276), (2, -2048), (3, 11202)])

    # ---- 2A ---------------------------------------------------------------
    t2a = [u2[i] + 4096 * x for i, x in enumerate(shift(inv(u2), 2))]
    t2a[1] += 24
    check("2A", t2a, [(1, 4372), (2, 96256), (3, 1240002)])

    # ---- 4A ---------------------------------------------------------------
    t4a = mul(mul(p2_24, p2_24), inv(mul(p1_24, p4_24)))
    t4a[1] -= 24
    check("4A", t4a, [(1, 276), (2, 2048), (3, 11202)])

    # ---- 3A ---------------------------------------------------------------
    u3 = mul(pow_series(P[1], 12), inv(pow_series(P[3], 12)))
    t3a = [u3[i] + 729 * x for i, x in enumerate(shift(inv(u3), 2))]
    t3a[1] += 12
    check("3A", t3a, [(1, 783), (2, 8672), (3, 65367)])

    # ---- 4B ---------------------------------------------------------------
    # (q*T_4B)^2 = q^2*(T_2A(q^2) + 104); t2a[i] = coeff of q^(i-1) in T_2A,
    # so T_2A(q^2) has coeff t2a[i] at exponent 2(i-1), index 2i in q^2*(...).
    w = [0] * N
    for i, c in enumerate(t2a):
        if c and 2 * i < N:
            w[2 * i] = c
    w[2] += 104
    t4b = sqrt_series(w)
    check("4B", t4b, [(1, 52), (2, 0), (3, 834)])

    # ---- 6A ---------------------------------------------------------------
    u6 = mul(pow_series(mul(P[1], P[3]), 6), inv(pow_series(mul(P[2], P[6]), 6)))
    t6a = [u6[i] + 64 * x for i, x in enumerate(shift(inv(u6), 2))]
    t6a[1] += 6
    check("6A", t6a, [(1, 79), (2, 352), (3, 1431)])

    for label, series in [("1A", t1a), ("2A", t2a), ("2B", t2b), ("3A", t3a),
                          ("4A", t4a), ("4B", t4b), ("6A", t6a)]:
        emit(label, series)

    # Ramanujan tau spot check on the building block: Delta = sum tau(n) q^n
    assert p1_24[1] == -24 and p1_24[2] == 252 and p1_24[5] == -6048
    assert p1_24[5] == p1_24[1] * p1_24[2], "tau(6) != tau(2)*tau(3)"
    print("all checks passed")


if __name__ == "__main__":
    main()
