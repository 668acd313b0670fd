"""Time the numba and numpy kernel backends against each other.

    python benchmarks/bench_kernels.py [--repeat N]

Covers model enumeration (oracle tables) and falsity closure (dualHorn
facet search). Results of both backends are compared before timing.
"""
import argparse
import random
import time

import numpy as np

from facetabd import kernels
from facetabd.core import Formula
from facetabd.engines import compile_formula
from facetabd.generate import random_instance, scale_instance
from facetabd.polyfacet import _falsity_arrays


def _best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def _cases():
    rng = random.Random(0)
    enum = random_instance("horn", 20, 60, rng, unit_rate=0.0).kb
    comp = compile_formula(enum, enum.vars)
    yield "model_mask  (20 vars, 60 atoms)", kernels.model_mask, comp.arrays()

    big = scale_instance("dualhorn", 10_000, 50_000, seed=1)
    unitless = Formula(tuple(a for a in big.kb.atoms if a.relation.arity > 1),
                                big.kb.vars)
    arrays = _falsity_arrays(unitless)
    starts = np.array([unitless.index[m] for m in big.mans], dtype=np.int64)
    yield (f"falsity_closure (10k vars, {len(starts)} starts)", kernels.falsity_closure,
           arrays + (starts,))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available()
    print(f"backends: {', '.join(backends)}")
    for label, fn, call_args in _cases():
        outputs, row = {}, []
        for name in backends:
            kernels.set_backend(name)
            outputs[name] = fn(*call_args)
            row.append(f"{name} {_best_of(lambda: fn(*call_args), args.repeat) * 1000:9.2f} ms")
        if label.startswith("model_mask") and len(outputs) == 2:
            a, b = outputs.values()
            assert np.array_equal(np.asarray(a, bool), np.asarray(b, bool))
        elif len(outputs) == 2:
            (za, ca), (zb, cb) = outputs.values()
            live = ~np.asarray(ca, bool)
            assert np.array_equal(np.asarray(ca, bool), np.asarray(cb, bool))
            assert np.array_equal(np.asarray(za, bool)[live], np.asarray(zb, bool)[live])
        print(f"{label:42s} " + "  ".join(row))


if __name__ == "__main__":
    main()
