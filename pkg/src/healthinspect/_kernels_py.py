"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

The Gibbs routines copy the count tables into Python lists, run the same
arithmetic in the same order as the compiled loops, and write the results
back, so both backends produce identical assignments for identical
uniforms. The SVM epoch uses numpy dot products and agrees with the
compiled one to rounding.
"""

import numpy as np


def gibbs_sweep(doc_of_token, word_of_token, z, ndk, nkw, nk, alpha, beta, uniforms, p):
    n_topics = nk.shape[0]
    vbeta = nkw.shape[1] * beta
    docs = doc_of_token.tolist()
    words = word_of_token.tolist()
    zl = z.tolist()
    ndk_l = ndk.tolist()
    # topic-major access matches nkw[k, w] in the compiled loop
    nkw_l = nkw.tolist()
    nk_l = nk.tolist()
    us = uniforms.tolist()
    topics = range(n_topics)
    cum = [0.0] * n_topics

    for i in range(len(zl)):
        row = ndk_l[docs[i]]
        w = words[i]
        old = zl[i]
        row[old] -= 1
        nkw_l[old][w] -= 1
        nk_l[old] -= 1

        total = 0.0
        for k in topics:
            total += (row[k] + alpha) * (nkw_l[k][w] + beta) / (nk_l[k] + vbeta)
            cum[k] = total

        u = us[i] * total
        new = n_topics - 1
        for k in topics:
            if cum[k] > u:
                new = k
                break

        zl[i] = new
        row[new] += 1
        nkw_l[new][w] += 1
        nk_l[new] += 1

    z[:] = zl
    ndk[:] = ndk_l
    nkw[:] = nkw_l
    nk[:] = nk_l
    p[:] = cum


def foldin_sweep(doc_of_token, word_of_token, z, ndk, phi, alpha, uniforms, p):
    n_topics = phi.shape[0]
    docs = doc_of_token.tolist()
    words = word_of_token.tolist()
    zl = z.tolist()
    ndk_l = ndk.tolist()
    phi_cols = phi.T.tolist()
    us = uniforms.tolist()
    topics = range(n_topics)
    cum = [0.0] * n_topics

    for i in range(len(zl)):
        row = ndk_l[docs[i]]
        col = phi_cols[words[i]]
        old = zl[i]
        row[old] -= 1

        total = 0.0
        for k in topics:
            total += (row[k] + alpha) * col[k]
            cum[k] = total

        u = us[i] * total
        new = n_topics - 1
        for k in topics:
            if cum[k] > u:
                new = k
                break

        zl[i] = new
        row[new] += 1

    z[:] = zl
    ndk[:] = ndk_l
    p[:] = cum


def svm_dual_epoch(x, y, alpha, w, qii, order, c):
    worst = 0.0
    for i in order.tolist():
        xi = x[i]
        g = float(y[i] * np.dot(w, xi) - 1.0)
        a_old = float(alpha[i])
        if a_old == 0.0:
            pg = min(g, 0.0)
        elif a_old == c:
            pg = max(g, 0.0)
        else:
            pg = g
        pg = abs(pg)
        worst = max(worst, pg)
        if pg > 1e-12:
            a_new = min(max(a_old - g / qii[i], 0.0), c)
            alpha[i] = a_new
            w += ((a_new - a_old) * y[i]) * xi
    return worst
