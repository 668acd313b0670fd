import itertools
import random

import numpy as np
import pytest

from facetabd import kernels
from facetabd.core import Formula, evaluate, imp
from facetabd.engines import compile_formula
from facetabd.generate import random_instance
from facetabd.kernels import _numpy
from facetabd.polyfacet import _falsity_arrays


def _brute_mask(f, names):
    out = []
    for bits in itertools.product((0, 1), repeat=len(names)):
        out.append(evaluate(f, dict(zip(names, bits))))
    return np.array(out, dtype=bool)


@pytest.mark.parametrize("fragment", ["dualhorn", "affine2", "en", "horn", "imp"])
def test_model_mask_matches_evaluate(backend, fragment):
    rng = random.Random(7)
    for _ in range(30):
        f = random_instance(fragment, rng.randint(2, 7), rng.randint(1, 8), rng).kb
        comp = compile_formula(f, f.vars)
        got = kernels.model_mask(*comp.arrays()).astype(bool)
        assert np.array_equal(got, _brute_mask(f, f.vars))
        first = kernels.first_model(*comp.arrays())
        expect = np.flatnonzero(got)
        assert first == (int(expect[0]) if expect.size else -1)


def test_table_relation_kernel(backend):
    from facetabd.syntax import parse_instance
    inst = parse_instance("rel R 3 : 001 010 100 111\napp R a b c\napp R c b a\nhyp a\nman b\n")
    comp = compile_formula(inst.kb, inst.kb.vars)
    got = kernels.model_mask(*comp.arrays()).astype(bool)
    assert np.array_equal(got, _brute_mask(inst.kb, inst.kb.vars))


def test_backends_agree_on_falsity_closure():
    if "numba" not in kernels.available():
        pytest.skip("numba missing")
    rng = random.Random(3)
    for _ in range(50):
        inst = random_instance("dualhorn", rng.randint(3, 30), rng.randint(2, 60), rng,
                               unit_rate=0.0)
        arrays = _falsity_arrays(inst.kb)
        starts = np.array([inst.kb.index[m] for m in inst.mans], dtype=np.int64)
        results = []
        for name in ("numpy", "numba"):
            prev = kernels.set_backend(name)
            try:
                results.append(kernels.falsity_closure(*arrays, starts))
            finally:
                kernels.set_backend(prev)
        (z0, c0), (z1, c1) = results
        assert np.array_equal(np.asarray(c0, bool), np.asarray(c1, bool))
        # a conflicted row's zero set is unspecified
        live = ~np.asarray(c0, bool)
        assert np.array_equal(np.asarray(z0, bool)[live], np.asarray(z1, bool)[live])


def test_falsity_closure_semantics():
    # v0 -> v1 read as (v1 | -v0): v1 false forces v0 false
    f = Formula((imp("a", "b"), imp("b", "c")))
    arrays = _falsity_arrays(f)
    z, conflict = _numpy.falsity_closure(*arrays, np.array([f.index["c"]], dtype=np.int64))
    assert not conflict[0]
    assert [v for v in f.vars if z[0][f.index[v]]] == ["a", "b", "c"]


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
