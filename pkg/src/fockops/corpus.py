"""
Deterministic test-function corpora.

Every function here has order at most 1 and type below 1, so it lies in all
the classical Fock spaces and in every F_(1,p); the same corpus serves the
norm-equivalence brackets and the oracle comparison.
"""

from __future__ import annotations

import math

import numpy as np

from .functions import ExpPolyFunction, TaylorFunction, normalized_kernel


def _fixed():
    return [
        ("one", ExpPolyFunction([1])),
        ("z", ExpPolyFunction([0, 1])),
        ("z^2", ExpPolyFunction([0, 0, 1])),
        ("z^3", TaylorFunction([0, 0, 0, 1])),
        ("1+z", ExpPolyFunction([1, 1])),
        ("k_0.5", normalized_kernel(0.5)),
        ("k_0.3i", normalized_kernel(0.3j)),
        ("exp(z/2)", ExpPolyFunction([1], (0, 0.5, 0))),
        ("z exp(0.4z)", ExpPolyFunction([0, 1], (0, 0.4, 0))),
        ("(1-z^2) exp(-0.3iz)", ExpPolyFunction([1, 0, -1], (0, -0.3j, 0))),
    ]


def _random(rng: np.random.Generator, count: int, tag: str):
    out = []
    for i in range(count):
        cplx = lambda size: rng.normal(size=size) + 1j * rng.normal(size=size)
        if i % 2 == 0:
            deg = int(rng.integers(1, 9))
            c = cplx(deg + 1) / np.sqrt([math.factorial(k) for k in range(deg + 1)])
            f = TaylorFunction(c) if i % 4 == 0 else ExpPolyFunction(c)
            out.append((f"{tag}-poly{i}", f))
        else:
            deg = int(rng.integers(0, 4))
            c = cplx(deg + 1) / (1 + np.arange(deg + 1))
            a1 = rng.uniform(0.1, 0.8) * np.exp(2j * np.pi * rng.uniform())
            a0 = 0.3 * cplx(1)[0]
            out.append((f"{tag}-exp{i}", ExpPolyFunction(c, (a0, a1, 0))))
    return out


def base_corpus() -> list:
    """The 30-function corpus: 10 fixed, 20 seeded random."""
    return _fixed() + _random(np.random.default_rng(20240), 20, "A")


def doubled_corpus() -> list:
    """base_corpus plus 30 more functions from the same recipe under a new seed."""
    return base_corpus() + _random(np.random.default_rng(20241), 30, "B")
