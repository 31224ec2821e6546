"""Pure-Python/numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The compiled module is preferred at import time (see ``_backend``); this one
is the fallback and the reference the parity tests compare against.
"""
import numpy as np

TAG_ANOMALY = -1
TAG_NONE = 0
TAG_BRUTE = 1
TAG_II = 2
TAG_III = 3
TAG_IV = 4

# Beyond this digit product the int64 path could overflow; rows are redone
# with Python integers.
_INT64_SAFE = 2**62


def sieve(n_max):
    """Return ``(lam, omega, pplus)`` arrays of length ``n_max + 1``."""
    n_max = int(n_max)
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, int(n_max**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(n_max + 1, dtype=np.int64)
    unset = spf == 0
    spf[unset] = idx[unset]

    omega = np.zeros(n_max + 1, dtype=np.uint8)
    pplus = np.ones(n_max + 1, dtype=np.uint32)
    cur = idx.copy()
    cur[0] = 1
    live = np.nonzero(cur > 1)[0]
    while live.size:
        s = spf[cur[live]]
        omega[live] += 1
        # SPF chains are nondecreasing, so the last prime seen is P+.
        pplus[live] = s
        cur[live] //= s
        live = live[cur[live] > 1]
    pplus[0] = 0
    lam = np.where(omega % 2 == 1, -1, 1).astype(np.int8)
    lam[0] = 0
    return lam, omega, pplus


def dilation_mask(lam, N, d):
    """uint8 mask over 0..N-1 with mask[n] = 1 iff lambda(dn) lambda(phi_d(n)) = -1."""
    n = np.arange(1, N, dtype=np.int64)
    dn = d * n
    out = np.zeros(N, dtype=np.uint8)
    out[1:] = (lam[dn] * lam[dn % N]) < 0
    return out


def pattern_counts(lam, N):
    """Counts of (lambda(n), lambda(N-n)) = (+,+), (+,-), (-,+), (-,-)."""
    left = lam[1:N].astype(np.int64)
    right = lam[N - 1 : 0 : -1].astype(np.int64)
    lp = left > 0
    rp = right > 0
    return (
        int(np.count_nonzero(lp & rp)),
        int(np.count_nonzero(lp & ~rp)),
        int(np.count_nonzero(~lp & rp)),
        int(np.count_nonzero(~lp & ~rp)),
    )


def dft_direct(x, roots):
    """out[a] = sum_n x[n] * roots[(n * a) % N] with N = len(roots)."""
    N = len(roots)
    x = np.asarray(x, dtype=np.float64)
    n = np.arange(N, dtype=np.int64)
    out = np.empty(N, dtype=np.complex128)
    chunk = max(1, (1 << 20) // max(N, 1))
    for start in range(0, N, chunk):
        a = np.arange(start, min(N, start + chunk), dtype=np.int64)
        idx = np.outer(a, n) % N
        out[start : start + a.size] = roots[idx] @ x
    return out


def _roundtrip_exact(n, N, p):
    # Python integers: no overflow concerns.
    x, num, prod, k = n, 0, 1, 0
    while x > 0 and N // x < p:
        r = N // x
        k += 1
        prod *= r
        num = num * r + (N if k % 2 == 1 else -N)
        x = N - r * x
    sign = -1 if k % 2 else 1
    return n * prod == num + sign * x


def pierce_roundtrip(N, p):
    """Check the Pierce reconstruction identity for every 1 <= n < N.

    The identity is evaluated with a common denominator accumulated digit by
    digit (never by inverting the step map). Returns ``(checked, mismatches,
    wide)`` where ``wide`` counts rows whose digit product left int64 range
    and were settled with Python integers.
    """
    n0 = np.arange(1, N, dtype=np.int64)
    x = n0.copy()
    num = np.zeros_like(x)
    prod = np.ones_like(x)
    prod_f = np.ones(x.size, dtype=np.float64)
    k = np.zeros_like(x)
    active = N // x < p
    while active.any():
        i = np.nonzero(active)[0]
        r = N // x[i]
        k[i] += 1
        prod[i] *= r
        prod_f[i] *= r
        num[i] = num[i] * r + np.where(k[i] % 2 == 1, N, -N)
        x[i] = N - r * x[i]
        active[i] = (x[i] > 0) & (N // np.maximum(x[i], 1) < p)
        active &= prod_f * N < _INT64_SAFE
    wide = np.nonzero(prod_f * N >= _INT64_SAFE)[0]
    sign = np.where(k % 2 == 1, -1, 1)
    ok = n0 * prod == num + sign * x
    ok[wide] = True
    mismatches = int(np.count_nonzero(~ok))
    for j in wide:
        if not _roundtrip_exact(int(n0[j]), int(N), int(p)):
            mismatches += 1
    return N - 1, mismatches, int(wide.size)


def product_formula_scan(lam, N, p, in_e):
    """Compare Lambda_p(n) with the signature product for every n < N.

    Returns ``(fail, explained)`` uint8 masks over 0..N-1. ``explained[n]`` is
    set when some step j of the trajectory has r_j * n_{j-1} in E(N) or
    phi_p(n_j) in E(N).
    """
    n0 = np.arange(1, N, dtype=np.int64)
    pn = p * n0
    lam_p = lam[pn] * lam[pn % N]
    prod = np.ones(N - 1, dtype=np.int64)
    hit = np.zeros(N - 1, dtype=bool)
    x = n0.copy()
    active = N // x < p
    while active.any():
        i = np.nonzero(active)[0]
        xi = x[i]
        r = N // xi
        y = (p * xi) % N
        ry = r * y
        prod[i] *= lam[ry] * lam[ry % N]
        nxt = N - r * xi
        hit[i] |= (in_e[r * xi] != 0) | (in_e[(p * nxt) % N] != 0)
        x[i] = nxt
        active[i] = (nxt > 0) & (N // np.maximum(nxt, 1) < p)
    fail = np.zeros(N, dtype=np.uint8)
    explained = np.zeros(N, dtype=np.uint8)
    fail[1:] = prod != lam_p
    explained[1:] = hit
    return fail, explained


def nu_scan(N, r_max):
    """nu[m] = number of n < N whose theta-trajectory visits m, for m > N/(r_max+1)."""
    nu = np.zeros(N, dtype=np.int64)
    x = np.arange(1, N, dtype=np.int64)
    while x.size:
        r = N // x
        x = x[r <= r_max]
        if not x.size:
            break
        np.add.at(nu, x, 1)
        x = N - (N // x) * x
        x = x[x > 0]
    return nu


def _square_witness(lam, M):
    for n in range(1, (M - 1) // 2 + 1):
        if lam[n] == lam[M - n]:
            return M - 2 * n
    return 0


def shusterman_one(lam, pplus, N):
    """Witness (a, b, tag) for one even N, mirroring the four proof cases."""
    if N % 8 == 0:
        q = N // 8
        if lam[q] < 0:
            return 4 * q, 4 * q, TAG_II
        return 3 * q, 5 * q, TAG_II
    if lam[N] > 0:
        return N // 2, N // 2, TAG_III
    two_k = 1
    rest = N
    while rest % 2 == 0:
        rest //= 2
        two_k *= 2
    M = 1
    while rest > 1:
        q = int(pplus[rest])
        e = 0
        while rest % q == 0:
            rest //= q
            e += 1
        M *= q ** (e // 2)
    tag = TAG_BRUTE
    if M >= 11:
        d = _square_witness(lam, M)
        if d:
            c = N // (M * M)
            return c * (M * M - d * d), c * d * d, TAG_IV
        tag = TAG_ANOMALY
    for a in range(1, N // 2 + 1):
        if lam[a] < 0 and lam[N - a] < 0:
            return a, N - a, tag
    return 0, 0, TAG_NONE if tag == TAG_BRUTE else TAG_ANOMALY


def shusterman_sweep(lam, pplus, n_lo, n_hi):
    """Witnesses for every even N in [n_lo, n_hi]; returns (Ns, a, b, tag) arrays."""
    start = n_lo + (n_lo % 2)
    Ns = np.arange(start, n_hi + 1, 2, dtype=np.int64)
    a = np.zeros(Ns.size, dtype=np.int64)
    b = np.zeros(Ns.size, dtype=np.int64)
    tag = np.zeros(Ns.size, dtype=np.int8)
    for i, N in enumerate(Ns.tolist()):
        a[i], b[i], tag[i] = shusterman_one(lam, pplus, N)
    return Ns, a, b, tag
