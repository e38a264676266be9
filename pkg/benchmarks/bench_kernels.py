"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sweeps N] [--epochs N]

Both backends run on identical inputs; the script also reports whether
their outputs agree.
"""

import argparse
import time

import numpy as np

from healthinspect import kernels
from healthinspect.dtm import build_dtm
from healthinspect.lda import LdaConfig, fit_lda, infer_thetas
from healthinspect.pipeline import Corpus
from healthinspect.svm import SvmConfig, train_svm
from healthinspect.synthdata import SynthConfig, generate_corpus
from healthinspect.textprep import load_stopwords


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return time.perf_counter() - t0, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--docs", type=int, default=300)
    parser.add_argument("--sweeps", type=int, default=20)
    parser.add_argument("--epochs", type=int, default=50)
    args = parser.parse_args()

    corpus = Corpus.from_documents(generate_corpus(SynthConfig(n_docs=args.docs)), load_stopwords())
    counts = build_dtm(corpus.tokens)
    n_tokens = int(counts.matrix.sum())
    cfg = LdaConfig(k=20, sweeps=args.sweeps, infer_sweeps=args.sweeps, seed=3)

    rng = np.random.default_rng(0)
    x = rng.normal(size=(1000, 220))
    y = np.where(x[:, 0] + 0.5 * rng.normal(size=1000) > 0, 1, -1)
    svm_cfg = SvmConfig(c=1.0, tol=1e-12, max_epochs=args.epochs)

    backends = kernels.available_backends()
    results = {}
    print(f"corpus: {counts.n_docs} docs, {n_tokens} tokens, {len(counts.vocabulary)} terms")
    print(f"{'kernel':<28}" + "".join(f"{b:>12}" for b in backends))
    rows = {
        f"gibbs fit ({args.sweeps} sweeps)": lambda b: fit_lda(counts, cfg, backend=b),
        f"fold-in ({args.sweeps} sweeps)": lambda b: infer_thetas(
            fit_lda(counts, LdaConfig(k=20, sweeps=1, infer_sweeps=args.sweeps)), counts, 1, backend=b),
        f"svm dual CD ({args.epochs} epochs)": lambda b: train_svm(x, y, svm_cfg, backend=b),
    }
    for name, run in rows.items():
        times = []
        for b in backends:
            t, out = timed(lambda: run(b))
            times.append(t)
            results[(name, b)] = out
        print(f"{name:<28}" + "".join(f"{t:>11.3f}s" for t in times))
        if len(times) == 2:
            print(f"{'  speedup':<28}{times[1] / times[0]:>11.1f}x")

    if len(backends) == 2:
        fit_a, fit_b = (results[(next(iter(rows)), b)] for b in backends)
        print("gibbs assignments identical:", np.array_equal(fit_a.assignments, fit_b.assignments))
        name = list(rows)[2]
        w_a, w_b = (results[(name, b)].w for b in backends)
        print("svm weights max abs diff:", float(np.max(np.abs(w_a - w_b))))


if __name__ == "__main__":
    main()
