"""Hot loops behind a backend switch.

Two kernels dominate run time: exhaustive model enumeration (the oracle and
the BRUTE engine) and falsity propagation for dualHorn entailment. Each has a
numba implementation and a vectorized numpy one. The numba path is used when
numba imports and ``FACETABD_NUMBA`` is not set to ``0``.

Compiled formula layout shared by the enumeration kernels, one entry per atom:

* ``kinds``: 0 clause, 1 xor, 2 truth table
* ``arg_ptr``/``args``: CSR list of variable indices (first argument is the
  most significant bit of the atom's tuple index)
* ``params``: falsifying tuple index (clause), parity (xor), offset into
  ``tables`` (table)

Assignment ``a`` gives variable ``i`` the bit ``(a >> (n - 1 - i)) & 1``, so
integer order is lexicographic order on assignment vectors.

``falsity_closure`` returns one zero-set row per start variable and a conflict
flag; rows with the flag set may be left partially filled.
"""
import os

from . import _numpy

try:
    from . import _jit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _jit = None

HAVE_NUMBA = _jit is not None
_BACKENDS = {"numpy": _numpy}
if HAVE_NUMBA:
    _BACKENDS["numba"] = _jit


def _default():
    flag = os.environ.get("FACETABD_NUMBA", "1").strip().lower()
    if HAVE_NUMBA and flag not in ("0", "false", "no", "off"):
        return "numba"
    return "numpy"


BACKEND = _default()


def set_backend(name: str) -> str:
    """Switch backend; returns the previous one."""
    global BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable (have {sorted(_BACKENDS)})")
    prev, BACKEND = BACKEND, name
    return prev


def available():
    return sorted(_BACKENDS)


def first_model(*args):
    return _BACKENDS[BACKEND].first_model(*args)


def model_mask(*args):
    return _BACKENDS[BACKEND].model_mask(*args)


def falsity_closure(*args):
    return _BACKENDS[BACKEND].falsity_closure(*args)
