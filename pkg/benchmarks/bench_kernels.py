"""Compare the compiled kernels against the numpy fallback.

Times each hot kernel on shapes the grounding model actually produces
(batch 36, 16 objects, 4 views, 8 heads, width 128), in both float32
and float64, and cross-checks the outputs agree.  Run from the repo
root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from refgraph.kernels import NATIVE, _fallback

if NATIVE:
    from refgraph.kernels import _native
else:
    _native = None


def timeit(fn, *args, repeat=30):
    fn(*args)  # warm
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, fallback_fn, native_fn, args, check=None):
    tf = timeit(fallback_fn, *args)
    if native_fn is None:
        print(f"{name:<26} fallback {tf * 1e3:7.3f} ms   (no extension)")
        return
    tn = timeit(native_fn, *args)
    out_f = fallback_fn(*args)
    out_n = native_fn(*args)
    if check:
        check(out_f, out_n)
    print(f"{name:<26} fallback {tf * 1e3:7.3f} ms   native {tn * 1e3:7.3f} ms"
          f"   speedup {tf / tn:5.2f}x")


def same(a, b):
    a = a if isinstance(a, np.ndarray) else a[0]
    b = b if isinstance(b, np.ndarray) else b[0]
    assert a.dtype == b.dtype, (a.dtype, b.dtype)
    np.testing.assert_allclose(a, b, rtol=1e-5, atol=1e-7)


def main():
    print(f"compiled extension present: {NATIVE}")
    for dtype in (np.float32, np.float64):
        rng = np.random.default_rng(0)
        print(f"\n-- {np.dtype(dtype).name} --")
        act = rng.normal(0, 1, (36 * 16, 256)).astype(dtype)
        grad = rng.normal(0, 1, act.shape).astype(dtype)
        bench("relu_fwd", _fallback.relu_fwd,
              _native.relu_fwd if NATIVE else None, (act,), same)
        relu_out = _fallback.relu_fwd(act)
        bench("relu_bwd", _fallback.relu_bwd,
              _native.relu_bwd if NATIVE else None, (relu_out, grad), same)

        # attention rows are flattened to 2-d before the kernel sees them
        logits = rng.normal(0, 1, (36 * 4 * 8 * 26, 26)).astype(dtype)
        bench("softmax_fwd", _fallback.softmax_fwd,
              _native.softmax_fwd if NATIVE else None, (logits,), same)
        probs = _fallback.softmax_fwd(logits)
        gl = rng.normal(0, 1, logits.shape).astype(dtype)
        bench("softmax_bwd", _fallback.softmax_bwd,
              _native.softmax_bwd if NATIVE else None, (probs, gl), same)

        x = rng.normal(0, 1, (36 * 16, 128)).astype(dtype)
        gx = rng.normal(0, 1, x.shape).astype(dtype)
        bench("layernorm_fwd", _fallback.layernorm_fwd,
              _native.layernorm_fwd if NATIVE else None, (x, 1e-5), same)
        out, inv = _fallback.layernorm_fwd(x, 1e-5)
        bench("layernorm_bwd", _fallback.layernorm_bwd,
              _native.layernorm_bwd if NATIVE else None, (out, inv, gx), same)

        pts = rng.normal(0, 1, (36 * 16, 64, 64)).astype(dtype)
        bench("maxpool_fwd", _fallback.maxpool_fwd,
              _native.maxpool_fwd if NATIVE else None, (pts,), same)
        _, idx = _fallback.maxpool_fwd(pts)
        gp = rng.normal(0, 1, (36 * 16, 64)).astype(dtype)
        bench("maxpool_bwd",
              lambda i, g: _fallback.maxpool_bwd(i, g, 64),
              (lambda i, g: _native.maxpool_bwd(i, g, 64))
              if NATIVE else None,
              (idx, gp), same)

        table_grad = np.zeros((900, 128), dtype=dtype)
        ids = rng.integers(0, 900, 36 * 26).astype(np.int64)
        ge = rng.normal(0, 1, (36 * 26, 128)).astype(dtype)

        def fb_scatter(g, i):
            buf = table_grad.copy()
            _fallback.embedding_scatter_add(buf, i, g)
            return buf

        def nat_scatter(g, i):
            buf = table_grad.copy()
            _native.embedding_scatter_add(buf, i, g)
            return buf

        bench("embedding_scatter_add", fb_scatter,
              nat_scatter if NATIVE else None, (ge, ids), same)


if __name__ == "__main__":
    main()
