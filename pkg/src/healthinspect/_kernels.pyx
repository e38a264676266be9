# Compiled inner loops. Every function here has a line-for-line twin in
# _kernels_py.py; both must evaluate floating point in the same order so
# the two backends stay bit-identical on the Gibbs paths.

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t idx_t


def gibbs_sweep(const idx_t[::1] doc_of_token,
                const idx_t[::1] word_of_token,
                idx_t[::1] z,
                idx_t[:, ::1] ndk,
                idx_t[:, ::1] nkw,
                idx_t[::1] nk,
                double alpha,
                double beta,
                const double[::1] uniforms,
                double[::1] p):
    """One collapsed Gibbs sweep over every token, updating counts in place."""
    cdef Py_ssize_t n_tokens = z.shape[0]
    cdef Py_ssize_t n_topics = nk.shape[0]
    cdef double vbeta = nkw.shape[1] * beta
    cdef Py_ssize_t i, k, d, w, old, new
    cdef double total, u

    for i in range(n_tokens):
        d = doc_of_token[i]
        w = word_of_token[i]
        old = z[i]
        ndk[d, old] -= 1
        nkw[old, w] -= 1
        nk[old] -= 1

        total = 0.0
        for k in range(n_topics):
            total += (ndk[d, k] + alpha) * (nkw[k, w] + beta) / (nk[k] + vbeta)
            p[k] = total

        u = uniforms[i] * total
        new = n_topics - 1
        for k in range(n_topics):
            if p[k] > u:
                new = k
                break

        z[i] = new
        ndk[d, new] += 1
        nkw[new, w] += 1
        nk[new] += 1


def foldin_sweep(const idx_t[::1] doc_of_token,
                 const idx_t[::1] word_of_token,
                 idx_t[::1] z,
                 idx_t[:, ::1] ndk,
                 const double[:, ::1] phi,
                 double alpha,
                 const double[::1] uniforms,
                 double[::1] p):
    """One fold-in sweep: resample held-out tokens with topic-word probs fixed."""
    cdef Py_ssize_t n_tokens = z.shape[0]
    cdef Py_ssize_t n_topics = phi.shape[0]
    cdef Py_ssize_t i, k, d, w, old, new
    cdef double total, u

    for i in range(n_tokens):
        d = doc_of_token[i]
        w = word_of_token[i]
        old = z[i]
        ndk[d, old] -= 1

        total = 0.0
        for k in range(n_topics):
            total += (ndk[d, k] + alpha) * phi[k, w]
            p[k] = total

        u = uniforms[i] * total
        new = n_topics - 1
        for k in range(n_topics):
            if p[k] > u:
                new = k
                break

        z[i] = new
        ndk[d, new] += 1


def svm_dual_epoch(const double[:, ::1] x,
                   const double[::1] y,
                   double[::1] alpha,
                   double[::1] w,
                   const double[::1] qii,
                   const idx_t[::1] order,
                   double c):
    """One pass of dual coordinate descent; returns the largest |projected gradient|."""
    cdef Py_ssize_t n_features = x.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double g, pg, a_old, a_new, step, worst = 0.0

    for t in range(order.shape[0]):
        i = order[t]
        g = 0.0
        for j in range(n_features):
            g += w[j] * x[i, j]
        g = y[i] * g - 1.0

        a_old = alpha[i]
        if a_old == 0.0:
            pg = g if g < 0.0 else 0.0
        elif a_old == c:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g

        if pg < 0.0:
            pg = -pg
        if pg > worst:
            worst = pg

        if pg > 1e-12:
            a_new = a_old - g / qii[i]
            if a_new < 0.0:
                a_new = 0.0
            elif a_new > c:
                a_new = c
            alpha[i] = a_new
            step = (a_new - a_old) * y[i]
            for j in range(n_features):
                w[j] += step * x[i, j]

    return worst
