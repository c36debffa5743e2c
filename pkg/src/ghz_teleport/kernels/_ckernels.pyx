# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same signatures as ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

NAME = "compiled"


cdef inline Py_ssize_t _bit(Py_ssize_t x, int slot, int n) nogil:
    return (x >> (n - 1 - slot)) & 1


def _scatter_table(int n, slots):
    """full[a, r]: register index whose ``slots`` bits spell ``a`` and whose
    remaining bits (in slot order) spell ``r``."""
    cdef int k = len(slots)
    cdef Py_ssize_t d = 1 << n
    cdef Py_ssize_t dk = 1 << k
    cdef Py_ssize_t dr = d // dk
    cdef cnp.int64_t[:, ::1] full = np.empty((dk, dr), dtype=np.int64)
    rest = [s for s in range(n) if s not in slots]
    cdef Py_ssize_t x, a, r
    cdef int i
    for x in range(d):
        a = 0
        for i in range(k):
            a = (a << 1) | _bit(x, slots[i], n)
        r = 0
        for i in range(n - k):
            r = (r << 1) | _bit(x, rest[i], n)
        full[a, r] = x
    return np.asarray(full)


def partial_trace(mat, int n, keep):
    keep = [int(s) for s in keep]
    cdef cnp.int64_t[:, ::1] f = _scatter_table(n, keep)
    cdef const double complex[:, ::1] m = np.ascontiguousarray(mat, dtype=np.complex128)
    cdef Py_ssize_t dk = f.shape[0]
    cdef Py_ssize_t dt = f.shape[1]
    out_arr = np.zeros((dk, dk), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, t
    cdef double complex acc
    with nogil:
        for i in range(dk):
            for j in range(dk):
                acc = 0
                for t in range(dt):
                    acc = acc + m[f[i, t], f[j, t]]
                out[i, j] = acc
    return out_arr


def apply_local(mat, op, int n, slots):
    slots = [int(s) for s in slots]
    cdef cnp.int64_t[:, ::1] f = _scatter_table(n, slots)
    cdef const double complex[:, ::1] m = np.ascontiguousarray(mat, dtype=np.complex128)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(op, dtype=np.complex128)
    cdef Py_ssize_t dk = f.shape[0]
    cdef Py_ssize_t dr = f.shape[1]
    cdef Py_ssize_t d = m.shape[0]
    tmp_arr = np.zeros((d, d), dtype=np.complex128)
    out_arr = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, ip, col, row
    cdef double complex acc
    with nogil:
        # tmp = A rho
        for r in range(dr):
            for i in range(dk):
                row = f[i, r]
                for col in range(d):
                    acc = 0
                    for ip in range(dk):
                        acc = acc + a[i, ip] * m[f[ip, r], col]
                    tmp[row, col] = acc
        # out = tmp A^dagger
        for r in range(dr):
            for i in range(dk):
                col = f[i, r]
                for row in range(d):
                    acc = 0
                    for ip in range(dk):
                        acc = acc + tmp[row, f[ip, r]] * a[i, ip].conjugate()
                    out[row, col] = acc
    return out_arr


def apply_local_ket(vec, op, int n, slots):
    slots = [int(s) for s in slots]
    cdef cnp.int64_t[:, ::1] f = _scatter_table(n, slots)
    cdef const double complex[::1] v = np.ascontiguousarray(vec, dtype=np.complex128)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(op, dtype=np.complex128)
    cdef Py_ssize_t dk = f.shape[0]
    cdef Py_ssize_t dr = f.shape[1]
    out_arr = np.zeros(v.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t r, i, ip
    cdef double complex acc
    with nogil:
        for r in range(dr):
            for i in range(dk):
                acc = 0
                for ip in range(dk):
                    acc = acc + a[i, ip] * v[f[ip, r]]
                out[f[i, r]] = acc
    return out_arr


def branch_states(zeta, rho4):
    cdef const double complex[:, ::1] z = np.ascontiguousarray(zeta, dtype=np.complex128)
    cdef const double complex[:, :, :, ::1] rho = np.ascontiguousarray(rho4, dtype=np.complex128)
    cdef Py_ssize_t nk = z.shape[0]
    cdef Py_ssize_t db = rho.shape[0]
    cdef Py_ssize_t df = rho.shape[1]
    out_arr = np.zeros((nk, df, df), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_arr
    cdef Py_ssize_t kk, b, c, i, j
    cdef double complex w
    with nogil:
        for kk in range(nk):
            for b in range(db):
                if z[kk, b] == 0:
                    continue
                for c in range(db):
                    w = z[kk, b] * z[kk, c].conjugate()
                    if w == 0:
                        continue
                    for i in range(df):
                        for j in range(df):
                            out[kk, i, j] = out[kk, i, j] + w * rho[b, i, c, j]
    return out_arr


def transfer_tensor(zeta0, zeta1, rho4, rows):
    cdef const double complex[:, ::1] z0 = np.ascontiguousarray(zeta0, dtype=np.complex128)
    cdef const double complex[:, ::1] z1 = np.ascontiguousarray(zeta1, dtype=np.complex128)
    cdef const double complex[:, :, :, ::1] rho = np.ascontiguousarray(rho4, dtype=np.complex128)
    cdef const double complex[:, :, ::1] rw = np.ascontiguousarray(rows, dtype=np.complex128)
    cdef Py_ssize_t nk = z0.shape[0]
    cdef Py_ssize_t db = rho.shape[0]
    cdef Py_ssize_t df = rho.shape[1]
    cdef Py_ssize_t nt = rw.shape[1]
    cdef Py_ssize_t nu = 2 * nt
    out_arr = np.zeros((2, 2, nt, nt), dtype=np.complex128)
    cdef double complex[:, :, :, ::1] out = out_arr
    # Sparse factors: for each u = (j, m) keep only the nonzero products
    # zeta_j[b] * rows[m, x]. Measurement and correction tables make these
    # one-hot for the schemes here, so the double sum below is tiny.
    cap = db * df
    cnt_arr = np.zeros(nu, dtype=np.int64)
    pb_arr = np.zeros((nu, cap), dtype=np.int64)
    px_arr = np.zeros((nu, cap), dtype=np.int64)
    pv_arr = np.zeros((nu, cap), dtype=np.complex128)
    cdef cnp.int64_t[::1] cnt = cnt_arr
    cdef cnp.int64_t[:, ::1] pb = pb_arr
    cdef cnp.int64_t[:, ::1] px = px_arr
    cdef double complex[:, ::1] pv = pv_arr
    cdef Py_ssize_t kk, u, v, b, x, s, t, ju, mu_, jv, mv
    cdef double complex zb, w, acc
    with nogil:
        for kk in range(nk):
            for u in range(nu):
                cnt[u] = 0
                ju = u // nt
                mu_ = u % nt
                for b in range(db):
                    zb = z0[kk, b] if ju == 0 else z1[kk, b]
                    if zb == 0:
                        continue
                    for x in range(df):
                        w = zb * rw[kk, mu_, x]
                        if w != 0:
                            pb[u, cnt[u]] = b
                            px[u, cnt[u]] = x
                            pv[u, cnt[u]] = w
                            cnt[u] += 1
            for u in range(nu):
                ju = u // nt
                mu_ = u % nt
                for v in range(nu):
                    jv = v // nt
                    mv = v % nt
                    acc = 0
                    for s in range(cnt[u]):
                        for t in range(cnt[v]):
                            acc = acc + pv[u, s] * rho[pb[u, s], px[u, s], pb[v, t], px[v, t]] * pv[v, t].conjugate()
                    out[ju, jv, mu_, mv] = out[ju, jv, mu_, mv] + acc
    return out_arr


cdef inline int _sgn(int parity) nogil:
    return 1 - 2 * (parity & 1)


def wide_epr3(c, b, g1, g2, g3):
    cdef const double complex[::1] cc = np.ascontiguousarray(c, dtype=np.complex128)
    cdef const double[::1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double complex[:, :, :, ::1] ga = np.ascontiguousarray(g1, dtype=np.complex128)
    cdef const double complex[:, :, :, ::1] gb = np.ascontiguousarray(g2, dtype=np.complex128)
    cdef const double complex[:, :, :, ::1] gc = np.ascontiguousarray(g3, dtype=np.complex128)
    cdef int k, l, m, n, mu, nu, ep, la, om, ta
    cdef double complex total = 0
    cdef double complex term
    with nogil:
        for k in range(2):
            for l in range(2):
                for m in range(2):
                    for n in range(2):
                        for mu in range(2):
                            for nu in range(2):
                                for ep in range(2):
                                    for la in range(2):
                                        for om in range(2):
                                            for ta in range(2):
                                                term = (
                                                    cc[k] * cc[l].conjugate()
                                                    * cc[n] * cc[m].conjugate()
                                                    * _sgn((k + l + m + n) * (mu + nu + ep))
                                                    * bb[mu ^ k] * bb[mu ^ l]
                                                    * bb[nu ^ k] * bb[nu ^ l]
                                                    * bb[ep ^ k] * bb[ep ^ l]
                                                    * ga[k ^ la, m ^ la, l ^ la, n ^ la]
                                                    * gb[k ^ om, m ^ om, l ^ om, n ^ om]
                                                    * gc[k ^ ta, m ^ ta, l ^ ta, n ^ ta]
                                                )
                                                total = total + term
    return total.real


def wide_ghz2(c, b, g268, g479):
    cdef const double complex[::1] cc = np.ascontiguousarray(c, dtype=np.complex128)
    cdef const double[::1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double complex[:, :, :, :, :, ::1] ga = np.ascontiguousarray(g268, dtype=np.complex128)
    cdef const double complex[:, :, :, :, :, ::1] gb = np.ascontiguousarray(g479, dtype=np.complex128)
    cdef int k, l, m, n, mu, nu, ta, ep, la, kp, lp, mp, np_
    cdef double complex total = 0
    with nogil:
        for k in range(2):
            for l in range(2):
                for m in range(2):
                    for n in range(2):
                        for mu in range(2):
                            for nu in range(2):
                                for ta in range(2):
                                    kp = k ^ ta
                                    lp = l ^ ta
                                    mp = m ^ ta
                                    np_ = n ^ ta
                                    for ep in range(2):
                                        for la in range(2):
                                            total = total + (
                                                cc[kp] * cc[lp].conjugate()
                                                * cc[np_] * cc[mp].conjugate()
                                                * _sgn((k + l + m + n) * (mu + nu))
                                                * bb[mu ^ kp] * bb[mu ^ lp]
                                                * bb[nu ^ l] * bb[nu ^ k]
                                                * ga[k, k ^ ep, m, l, l ^ ep, n]
                                                * gb[kp ^ la, mp ^ la, mp ^ la,
                                                     lp ^ la, np_ ^ la, np_ ^ la]
                                            )
    return total.real
