"""Compare the compiled kernel against the pure-Python fallback.

Times the hot primitives head to head, then re-runs a representative
end-to-end workload (the degree-6 obstruction identity on a 3-chart
cover) with each backend patched into the consuming modules.

Run:  python benchmarks/bench_kernel.py
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from supercech._kernel import pykernel

try:
    from supercech._kernel import _ckernel
except ImportError:
    _ckernel = None

import supercech.coeffs as coeffs
import supercech.exterior as exterior
import supercech.operators as operators
from supercech.cech import CoverDescriptor, d0, solve_d1
from supercech.obstruction import R2q, r4_closed, r6_closed
from supercech.randgen import rand_cochain0

BACKENDS = [("py", pykernel)] + ([("c", _ckernel)] if _ckernel else [])

KERNEL_USERS = {
    coeffs: ("poly_mul_terms", "poly_add_terms"),
    exterior: ("wedge_sign",),
    operators: ("wedge_sign", "contract_sign", "push_contractions"),
}


def patch_backend(impl):
    for module, names in KERNEL_USERS.items():
        for name in names:
            setattr(module, name, getattr(impl, name))


def bench(label, fn, repeat=3):
    best = min(_timed(fn) for _ in range(repeat))
    print(f"  {label:<42} {best * 1e3:9.2f} ms")
    return best


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def make_poly_pair(nterms, nvars, rng):
    def poly():
        out = {}
        for _ in range(nterms):
            e = tuple(rng.randint(0, 6) for _ in range(nvars))
            out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 7))
        return out

    return poly(), poly()


def bench_primitives(impl, rng):
    a, b = make_poly_pair(60, 2, rng)

    def mul():
        for _ in range(200):
            impl.poly_mul_terms(a, b)

    def add():
        for _ in range(5000):
            impl.poly_add_terms(a, b, -1)

    masks = [(rng.randrange(128), rng.randrange(128)) for _ in range(4000)]

    def signs():
        total = 0
        for x, y in masks:
            total += impl.wedge_sign(x, y) + impl.contract_sign(x & y, y)
        return total

    def pushes():
        for x, y in masks[:1000]:
            impl.push_contractions(x & 0b1010101, y)

    bench("poly_mul_terms  (60x60 terms, 200 reps)", mul)
    bench("poly_add_terms  (5000 reps)", add)
    bench("wedge/contract signs (8000 calls)", signs)
    bench("push_contractions (1000 calls)", pushes)


def bench_end_to_end(rng_seed):
    rng = random.Random(rng_seed)
    cover = CoverDescriptor.formal(3, ("x",), 7)

    def workload():
        w = rand_cochain0(rng, cover, (2,), atoms=3)
        u2 = d0(w)
        u4, _ = solve_d1(r4_closed(u2), 0)
        assert r6_closed(u2, u4) == R2q(u2 + u4, 3)

    return bench("degree-6 identity pipeline (1 instance)", workload, repeat=5)


def main():
    rng = random.Random(0)
    results = {}
    for name, impl in BACKENDS:
        print(f"backend: {name}")
        bench_primitives(impl, random.Random(1))
        patch_backend(impl)
        results[name] = bench_end_to_end(2)
    patch_backend(BACKENDS[-1][1])
    if len(results) == 2:
        ratio = results["py"] / results["c"]
        print(f"end-to-end speedup (py/c): {ratio:.2f}x")
    else:
        print("compiled kernel not built; only the pure-Python backend timed")


if __name__ == "__main__":
    main()
