"""Pure numpy implementations of the hot kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature. The two are written independently (tensor reshapes and einsum
here, explicit index loops there) so that each can serve as a check on the
other.
"""
import numpy as np

NAME = "python"


def partial_trace(mat, n, keep):
    """Trace out every slot not in ``keep`` of an ``n``-qubit operator.

    The kept slots appear in the output in the order given by ``keep``.
    """
    keep = [int(s) for s in keep]
    traced = [s for s in range(n) if s not in keep]
    t = np.asarray(mat, dtype=complex).reshape((2,) * (2 * n))
    order = keep + traced
    t = t.transpose(order + [n + s for s in order])
    dk = 2 ** len(keep)
    dt = 2 ** len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("itjt->ij", t)


def apply_local(mat, op, n, slots):
    """Return ``A rho A^dagger`` with ``A`` acting on ``slots`` of an n-qubit register."""
    slots = [int(s) for s in slots]
    k = len(slots)
    a = np.asarray(op, dtype=complex).reshape((2,) * (2 * k))
    t = np.asarray(mat, dtype=complex).reshape((2,) * (2 * n))
    # left multiplication on the row axes
    t = np.tensordot(a, t, axes=(list(range(k, 2 * k)), slots))
    t = np.moveaxis(t, list(range(k)), slots)
    # right multiplication by A^dagger on the column axes
    cols = [n + s for s in slots]
    t = np.tensordot(t, a.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), cols)
    d = 2**n
    return t.reshape(d, d)


def apply_local_ket(vec, op, n, slots):
    """Apply ``op`` on ``slots`` of an n-qubit ket."""
    slots = [int(s) for s in slots]
    k = len(slots)
    a = np.asarray(op, dtype=complex).reshape((2,) * (2 * k))
    t = np.asarray(vec, dtype=complex).reshape((2,) * n)
    t = np.tensordot(a, t, axes=(list(range(k, 2 * k)), slots))
    t = np.moveaxis(t, list(range(k)), slots)
    return t.reshape(2**n)


def branch_states(zeta, rho4):
    """Unnormalized far-side states for every outcome.

    ``zeta[K, b]`` is the near-channel vector left after contracting the
    input with outcome K's measurement bra; ``rho4[b, i, c, j]`` is the
    channel density operator split as (near, far, near, far).
    """
    return np.einsum("kb,kc,bicj->kij", zeta, zeta.conj(), rho4, optimize=True)


def transfer_tensor(zeta0, zeta1, rho4, rows):
    """Quartic-form coefficients of the total fidelity.

    ``rows[K, m, x]`` holds ``<target_m| U_K |x>``. The result ``T`` satisfies
    ``F(c) = sum c_j c_j'^* c_m^* c_n T[j, j', m, n]``.
    """
    zeta = np.stack([zeta0, zeta1], axis=1)  # (K, j, b)
    nk, _, db = zeta.shape
    df = rho4.shape[1]
    nt = rows.shape[1]
    # alpha[K, (j, m), (b, x)] = zeta_j[b] rows[m, x]
    alpha = np.einsum("kjb,kmx->kjmbx", zeta, rows).reshape(nk, 2 * nt, db * df)
    rho = rho4.reshape(db * df, db * df)
    t = alpha @ rho @ alpha.conj().transpose(0, 2, 1)  # (K, (j,m), (p,n))
    t = t.sum(axis=0).reshape(2, nt, 2, nt)
    return t.transpose(0, 2, 1, 3)


def _sign(*bits):
    return 1 - 2 * (sum(bits) & 1)


def wide_epr3(c, b, g1, g2, g3):
    """Index-sum fidelity of the 3-EPR scheme from the three pair tensors.

    The sign factor and the b factors split over the three pairs, so the sum
    is carried out as one 2x2x2x2 factor per pair.
    """
    c = np.asarray(c, dtype=complex)
    b = np.asarray(b, dtype=float)
    total = np.ones((2, 2, 2, 2), dtype=complex)
    for g in (g1, g2, g3):
        g = np.asarray(g, dtype=complex)
        q = np.zeros((2, 2, 2, 2), dtype=complex)
        for k, l, m, n in np.ndindex(2, 2, 2, 2):
            acc = 0.0
            for mu in (0, 1):
                s = _sign(mu * k, mu * l, mu * m, mu * n)
                for lam in (0, 1):
                    acc += (
                        s
                        * b[mu ^ k]
                        * b[mu ^ l]
                        * g[k ^ lam, m ^ lam, l ^ lam, n ^ lam]
                    )
            q[k, l, m, n] = acc
        total *= q
    coef = np.einsum("k,l,n,m->klmn", c, c.conj(), c, c.conj())
    return float(np.real(np.sum(coef * total)))


def wide_ghz2(c, b, g268, g479):
    """Index-sum fidelity of the 2-GHZ scheme from the two triple tensors."""
    c = np.asarray(c, dtype=complex)
    b = np.asarray(b, dtype=float)
    ga = np.asarray(g268, dtype=complex)
    gb = np.asarray(g479, dtype=complex)
    idx = np.array(list(np.ndindex(*(2,) * 9)))
    k, l, m, n, mu, nu, tau, eps, lam = idx.T
    kp, lp, mp, np_ = k ^ tau, l ^ tau, m ^ tau, n ^ tau
    sign = 1 - 2 * (((k + l + m + n) * (mu + nu)) & 1)
    terms = (
        c[kp]
        * c[lp].conj()
        * c[np_]
        * c[mp].conj()
        * sign
        * b[mu ^ kp]
        * b[mu ^ lp]
        * b[nu ^ l]
        * b[nu ^ k]
        * ga[k, k ^ eps, m, l, l ^ eps, n]
        * gb[kp ^ lam, mp ^ lam, mp ^ lam, lp ^ lam, np_ ^ lam, np_ ^ lam]
    )
    return float(np.real(terms.sum()))
