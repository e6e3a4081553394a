"""Select the compiled search kernels when available.

Set ``ENGULF_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import importlib
import os

from ._kernels_py import Overflow  # noqa: F401  (shared by both backends)

_MODULES = {"cython": "engulf._kernels", "python": "engulf._kernels_py"}


def load(name: str):
    """Kernel module for a backend name; ImportError if not built."""
    return importlib.import_module(_MODULES[name])


def available_backends() -> list[str]:
    out = []
    for name in _MODULES:
        try:
            load(name)
        except ImportError:
            continue
        out.append(name)
    return out


def set_backend(name: str) -> str:
    """Switch the process-wide backend; returns the previous name."""
    global impl, BACKEND
    previous = BACKEND
    impl = load(name)
    BACKEND = name
    return previous


if os.environ.get("ENGULF_PURE_PYTHON", "") not in ("", "0"):
    BACKEND = "python"
    impl = load("python")
else:
    try:
        impl = load("cython")
        BACKEND = "cython"
    except ImportError:
        impl = load("python")
        BACKEND = "python"


def column_of(letter: int, ngens: int) -> int:
    """Signed letter (+-(i+1)) to table column."""
    return letter - 1 if letter > 0 else ngens - letter - 1


def word_columns(word, ngens: int) -> list[int]:
    return [column_of(x, ngens) for x in word.letters()]


def relator_rotations(relators, ngens: int) -> list[list[list[int]]]:
    """All cyclic rotations of relators and their inverses, keyed by first column."""
    nc = 2 * ngens
    inv = [(x + ngens) % nc for x in range(nc)]
    by_col: list[list[list[int]]] = [[] for _ in range(nc)]
    seen = set()
    for r in relators:
        cols = word_columns(r, ngens)
        for w in (cols, [inv[x] for x in reversed(cols)]):
            for i in range(len(w)):
                rot = tuple(w[i:] + w[:i])
                if rot not in seen:
                    seen.add(rot)
                    by_col[rot[0]].append(list(rot))
    return by_col
