"""Brute-force reference implementations used only by the test suite.

Everything here is deliberately naive: trial division, explicit double
loops and direct complex sums. Nothing imports from ``llab``.
"""
import cmath
from fractions import Fraction
from math import gcd


def factor(n):
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def liouville(n):
    return -1 if len(factor(n)) % 2 else 1


def big_omega(n):
    return len(factor(n))


def largest_prime_factor(n):
    f = factor(n)
    return max(f) if f else 1


def is_prime(n):
    return n >= 2 and factor(n) == [n]


def e(x):
    return cmath.exp(2j * cmath.pi * x)


def agreement_set(N, eta):
    return {n for n in range(1, N) if liouville(n) * liouville(N - n) == eta}


def base_set(N):
    plus, minus = agreement_set(N, 1), agreement_set(N, -1)
    return (1, plus) if len(plus) <= len(minus) else (-1, minus)


def E_d(N, d):
    return {n for n in range(1, N)
            if liouville(d * n) * liouville((d * n) % N) == -1}


def phi_inv(S, a, N):
    return {n for n in range(1, N) if (a * n) % N in S}


def S_lambda(N, a):
    return sum(liouville(n) * e(n * a / N) for n in range(1, N))


def theta(n, N):
    return N - n * (N // n)


def signature(n, N, p):
    digits, traj = [], [n]
    x = n
    while N // x < p:
        digits.append(N // x)
        x = theta(x, N)
        traj.append(x)
    return digits, traj


def pierce_value(digits, residual, N):
    total = Fraction(0)
    prod = 1
    for j, r in enumerate(digits, 1):
        prod *= r
        total += Fraction((-1) ** (j - 1), prod)
    return N * total + Fraction((-1) ** len(digits) * residual, prod)


def nu_brute(N, m):
    """Number of n < N whose theta-trajectory passes through m."""
    count = 0
    for n in range(1, N):
        x = n
        while x > 0:
            if x == m:
                count += 1
                break
            if x < m:
                break
            x = theta(x, N)
    return count


def primitive_root(N):
    for g in range(2, N):
        if len({pow(g, k, N) for k in range(N - 1)}) == N - 1:
            return g
    return 1


def star_disc_brute(points):
    """sup over t of |#{x < t}/M - t| and |#{x <= t}/M - t|, exact."""
    M = len(points)
    best = Fraction(0)
    for t in list(points) + [Fraction(1)]:
        lt = sum(1 for x in points if x < t)
        le = sum(1 for x in points if x <= t)
        best = max(best, abs(Fraction(lt, M) - t), abs(Fraction(le, M) - t))
    return best


def interval_disc_brute(points):
    """sup over all subintervals of [0, 1], over open and closed forms."""
    M = len(points)
    ends = sorted(set(points) | {Fraction(0), Fraction(1)})
    best = Fraction(0)
    for i, a in enumerate(ends):
        for b in ends[i:]:
            closed = sum(1 for x in points if a <= x <= b)
            opened = sum(1 for x in points if a < x < b)
            best = max(best, abs(Fraction(closed, M) - (b - a)),
                       abs(Fraction(opened, M) - (b - a)))
    return best


def coprime(a, b):
    return gcd(a, b) == 1
