"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot entry points (sparse multiply, sparse add, Gaussian
elimination over F_p) on randomly generated workloads, then a composite
end-to-end workload (Cartier round-trips on random forms) under both
implementations.

Run:  python benchmarks/bench_kernels.py
"""

import os
import random
import sys
import time


def _random_poly(rng, nvars, p, terms):
    return {
        tuple(rng.randint(0, 6) for _ in range(nvars)): rng.randint(1, p - 1)
        for _ in range(terms)
    }


def _bench(label, fn, repeats=5):
    best = min(_timed(fn) for _ in range(repeats))
    print(f"  {label:<28} {best * 1000:10.2f} ms")
    return best


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def bench_primitives():
    from katoforms import _fallback

    try:
        from katoforms import _speedups
    except ImportError:
        print("compiled kernels unavailable; nothing to compare")
        return

    rng = random.Random(7)
    polys = [(_random_poly(rng, 3, 3, 40), _random_poly(rng, 3, 3, 40)) for _ in range(30)]
    mats = []
    for _ in range(20):
        n, m = 120, 80
        rows = [[rng.randrange(3) for _ in range(m)] for _ in range(n)]
        rhs = [rng.randrange(3) for _ in range(n)]
        mats.append((rows, rhs))

    results = {}
    for name, impl in [("compiled", _speedups), ("pure python", _fallback)]:
        print(f"{name}:")
        results[name, "mul"] = _bench(
            "poly_mul 40x40 terms x30", lambda: [impl.poly_mul(a, b, 3) for a, b in polys]
        )
        results[name, "add"] = _bench(
            "poly_add x30", lambda: [impl.poly_add(a, b, 3) for a, b in polys]
        )
        results[name, "gauss"] = _bench(
            "gauss 120x80 over F_3 x20",
            lambda: [impl.gauss_solve(r, t, 3) for r, t in mats],
        )
    for op in ("mul", "add", "gauss"):
        ratio = results["pure python", op] / results["compiled", op]
        print(f"speedup {op}: {ratio:.1f}x")


def bench_composite():
    # end-to-end: Cartier round trips through the selected kernel layer
    impl = os.environ.get("KATOFORMS_PURE") == "1" and "pure python" or "selected"
    from katoforms import FunctionField, cartier_raw, sp
    from katoforms.forms import random_form_rng
    from katoforms.kernels import IMPL_NAME

    rng = random.Random(11)
    fld = FunctionField.make(3, ["x", "y", "z"])
    forms = [random_form_rng(fld, 2, 4, 3, rng) for _ in range(60)]

    def work():
        for w in forms:
            assert cartier_raw(sp(w)) == w

    best = min(_timed(work) for _ in range(3))
    print(f"composite Cartier round-trip x60 [{IMPL_NAME}]: {best * 1000:.1f} ms")


if __name__ == "__main__":
    print("kernel primitive comparison")
    bench_primitives()
    print()
    bench_composite()
    if os.environ.get("KATOFORMS_PURE") != "1":
        print("re-run with KATOFORMS_PURE=1 to time the composite on the fallback")
    sys.exit(0)
