# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; signatures mirror ``llab._pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    typedef __int128 llab_i128;
    """
    ctypedef long long llab_i128

ctypedef cnp.int8_t i8
ctypedef cnp.uint8_t u8
ctypedef cnp.int64_t i64
ctypedef cnp.uint32_t u32

TAG_ANOMALY = -1
TAG_NONE = 0
TAG_BRUTE = 1
TAG_II = 2
TAG_III = 3
TAG_IV = 4

# digit products above 2**90 are settled in Python (n_max < 2**31 keeps
# every intermediate below 2**127)
cdef double _I128_GUARD = 1237940039285380274899124224.0


def sieve(Py_ssize_t n_max):
    cdef cnp.ndarray[i8] lam_a = np.zeros(n_max + 1, dtype=np.int8)
    cdef cnp.ndarray[u8] om_a = np.zeros(n_max + 1, dtype=np.uint8)
    cdef cnp.ndarray[u32] pp_a = np.zeros(n_max + 1, dtype=np.uint32)
    cdef cnp.ndarray[u32] spf_a = np.zeros(n_max + 1, dtype=np.uint32)
    cdef cnp.ndarray[u32] pr_a = np.zeros(n_max // 2 + 2, dtype=np.uint32)
    cdef i8[:] lam = lam_a
    cdef u8[:] om = om_a
    cdef u32[:] pp = pp_a
    cdef u32[:] spf = spf_a
    cdef u32[:] primes = pr_a
    cdef Py_ssize_t i, j, np_ = 0, q
    cdef u32 p, s
    with nogil:
        if n_max >= 1:
            lam[1] = 1
            pp[1] = 1
        for i in range(2, n_max + 1):
            if spf[i] == 0:
                spf[i] = <u32>i
                primes[np_] = <u32>i
                np_ += 1
            s = spf[i]
            for j in range(np_):
                p = primes[j]
                if p > s:
                    break
                q = i * <Py_ssize_t>p
                if q > n_max:
                    break
                spf[q] = p
            # one step down the SPF chain
            q = i // s
            om[i] = om[q] + 1
            lam[i] = -lam[q]
            pp[i] = pp[q] if pp[q] > s else s
    return lam_a, om_a, pp_a


def dilation_mask(const i8[:] lam, long long N, long long d):
    cdef cnp.ndarray[u8] out_a = np.zeros(N, dtype=np.uint8)
    cdef u8[:] out = out_a
    cdef long long n, dn
    with nogil:
        for n in range(1, N):
            dn = d * n
            out[n] = (lam[dn] * lam[dn % N]) < 0
    return out_a


def pattern_counts(const i8[:] lam, long long N):
    # branch-free: the signs are close to random, so branches mispredict
    cdef long long n
    cdef long long c[4]
    c[0] = c[1] = c[2] = c[3] = 0
    with nogil:
        for n in range(1, N):
            c[2 * (lam[n] < 0) + (lam[N - n] < 0)] += 1
    return c[0], c[1], c[2], c[3]


def dft_direct(x, const double complex[:] roots):
    cdef const double[:] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t N = roots.shape[0]
    cdef cnp.ndarray[cnp.complex128_t] out_a = np.empty(N, dtype=np.complex128)
    cdef double complex[:] out = out_a
    cdef Py_ssize_t a, n, idx
    cdef double complex acc
    with nogil:
        for a in range(N):
            acc = 0
            idx = 0
            for n in range(N):
                # idx tracks n*a mod N exactly, no phase accumulation
                if xv[n] != 0:
                    acc = acc + xv[n] * roots[idx]
                idx += a
                if idx >= N:
                    idx -= N
            out[a] = acc
    return out_a


cdef bint _roundtrip_one(long long n, long long N, long long p, bint *wide) nogil:
    cdef long long x = n, r, k = 0
    cdef llab_i128 num = 0, prod = 1
    cdef double prod_f = 1.0
    while x > 0 and N // x < p:
        r = N // x
        k += 1
        prod_f *= r
        if prod_f >= _I128_GUARD:
            wide[0] = True
            return True
        prod *= r
        if k % 2 == 1:
            num = num * r + N
        else:
            num = num * r - N
        x = N - r * x
    if k % 2 == 1:
        return (<llab_i128>n) * prod == num - x
    return (<llab_i128>n) * prod == num + x


def pierce_roundtrip(long long N, long long p):
    from llab._pykernels import _roundtrip_exact
    cdef long long n, mismatches = 0, nwide = 0
    cdef bint wide, ok
    wide_rows = []
    for n in range(1, N):
        wide = False
        ok = _roundtrip_one(n, N, p, &wide)
        if wide:
            nwide += 1
            wide_rows.append(n)
        elif not ok:
            mismatches += 1
    for n in wide_rows:
        if not _roundtrip_exact(n, N, p):
            mismatches += 1
    return N - 1, mismatches, nwide


def product_formula_scan(const i8[:] lam, long long N, long long p, const u8[:] in_e):
    cdef cnp.ndarray[u8] fail_a = np.zeros(N, dtype=np.uint8)
    cdef cnp.ndarray[u8] expl_a = np.zeros(N, dtype=np.uint8)
    cdef u8[:] fail = fail_a
    cdef u8[:] expl = expl_a
    cdef long long n, x, r, y, ry, nxt, pn
    cdef int prod, lam_p
    cdef bint hit
    with nogil:
        for n in range(1, N):
            pn = p * n
            lam_p = lam[pn] * lam[pn % N]
            prod = 1
            hit = False
            x = n
            while x > 0 and N // x < p:
                r = N // x
                y = (p * x) % N
                ry = r * y
                prod *= lam[ry] * lam[ry % N]
                nxt = N - r * x
                if in_e[r * x] or in_e[(p * nxt) % N]:
                    hit = True
                x = nxt
            fail[n] = prod != lam_p
            expl[n] = hit
    return fail_a, expl_a


def nu_scan(long long N, long long r_max):
    cdef cnp.ndarray[i64] nu_a = np.zeros(N, dtype=np.int64)
    cdef i64[:] nu = nu_a
    cdef long long n, x, r
    with nogil:
        for n in range(1, N):
            x = n
            while x > 0:
                r = N // x
                if r > r_max:
                    break
                nu[x] += 1
                x = N - r * x
    return nu_a


cdef long long _square_witness(const i8[:] lam, long long M) nogil:
    cdef long long n
    for n in range(1, (M - 1) // 2 + 1):
        if lam[n] == lam[M - n]:
            return M - 2 * n
    return 0


cdef int _shusterman_one(const i8[:] lam, const u32[:] pplus, long long N,
                         long long *a, long long *b) nogil:
    cdef long long q, rest, M, e, d, c, t
    cdef int tag
    if N % 8 == 0:
        q = N // 8
        if lam[q] < 0:
            a[0] = 4 * q
            b[0] = 4 * q
        else:
            a[0] = 3 * q
            b[0] = 5 * q
        return 2
    if lam[N] > 0:
        a[0] = N // 2
        b[0] = N // 2
        return 3
    rest = N
    while rest % 2 == 0:
        rest //= 2
    M = 1
    while rest > 1:
        q = pplus[rest]
        e = 0
        while rest % q == 0:
            rest //= q
            e += 1
        while e >= 2:
            M *= q
            e -= 2
    tag = 1
    if M >= 11:
        d = _square_witness(lam, M)
        if d:
            c = N // (M * M)
            a[0] = c * (M * M - d * d)
            b[0] = c * d * d
            return 4
        tag = -1
    for t in range(1, N // 2 + 1):
        if lam[t] < 0 and lam[N - t] < 0:
            a[0] = t
            b[0] = N - t
            return tag
    a[0] = 0
    b[0] = 0
    return 0 if tag == 1 else -1


def shusterman_one(const i8[:] lam, const u32[:] pplus, long long N):
    cdef long long a = 0, b = 0
    cdef int tag = _shusterman_one(lam, pplus, N, &a, &b)
    return a, b, tag


def shusterman_sweep(const i8[:] lam, const u32[:] pplus, long long n_lo, long long n_hi):
    start = n_lo + (n_lo % 2)
    Ns_a = np.arange(start, n_hi + 1, 2, dtype=np.int64)
    cdef Py_ssize_t m = Ns_a.shape[0], i
    cdef cnp.ndarray[i64] a_a = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[i64] b_a = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[i8] t_a = np.zeros(m, dtype=np.int8)
    cdef i64[:] Ns = Ns_a
    cdef i64[:] av = a_a
    cdef i64[:] bv = b_a
    cdef i8[:] tv = t_a
    cdef long long aa, bb
    with nogil:
        for i in range(m):
            tv[i] = <i8>_shusterman_one(lam, pplus, Ns[i], &aa, &bb)
            av[i] = aa
            bv[i] = bb
    return Ns_a, a_a, b_a, t_a
