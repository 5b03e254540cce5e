"""Matrix permanents by three routes: brute force, Ryser, MacMahon.

The permanent is the determinant's sign-free cousin,
``perm(A) = sum_sigma prod_i A[i, sigma(i)]``, and is #P-hard, so every
algorithm here carries an explicit size guard.  ``permanent_naive`` is the
oracle (O(n! n)), ``permanent_ryser`` the workhorse (O(2^n n) with Gray-code
updates), and ``permanent_macmahon`` an independent cross-check that extracts
the permanent as a coefficient of a product of linear forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import macmahon
from .linops import as_square_matrix

NAIVE_MAX_DIM = 10
RYSER_MAX_DIM = 30

_ALGORITHMS = ("naive", "ryser", "macmahon")


@dataclass(frozen=True)
class PermanentResult:
    value: complex
    algorithm: str
    dimension: int


def permanent_naive(a) -> complex:
    """Permutation-sum definition, usable as an oracle for n <= 10."""
    a = as_square_matrix(a)
    n = a.shape[0]
    if n > NAIVE_MAX_DIM:
        raise ValueError(f"naive permanent limited to n <= {NAIVE_MAX_DIM}, got n={n}")
    if n == 0:
        return complex(1.0)
    total = 0.0 + 0.0j
    for sigma in permutations(range(n)):
        term = 1.0 + 0.0j
        for i, j in enumerate(sigma):
            term *= a[i, j]
        total += term
    return complex(total)


def permanent_ryser(a) -> complex:
    """Ryser's inclusion-exclusion formula with Gray-code subset updates.

    ``perm(A) = (-1)^n sum_{S subset [n]} (-1)^|S| prod_i sum_{j in S} A[i, j]``.
    Successive subsets differ in one element, so the row sums are updated in
    O(n) per subset instead of recomputed.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    if n > RYSER_MAX_DIM:
        raise ValueError(f"Ryser permanent limited to n <= {RYSER_MAX_DIM}, got n={n}")
    if n == 0:
        return complex(1.0)
    row_sums = np.zeros(n, dtype=complex)
    total = 0.0 + 0.0j
    sign = 1.0
    gray_prev = 0
    for k in range(1, 2**n):
        gray = k ^ (k >> 1)
        changed = gray ^ gray_prev
        col = changed.bit_length() - 1
        if gray & changed:
            row_sums += a[:, col]
        else:
            row_sums -= a[:, col]
        sign = -sign
        total += sign * np.prod(row_sums)
        gray_prev = gray
    if n % 2:
        total = -total
    return complex(total)


def permanent_macmahon(a) -> complex:
    """Permanent via multilinear expansion of column forms; see ``macmahon``."""
    a = as_square_matrix(a)
    return macmahon.permanent_via_macmahon(a, a.shape[0])


def compute_permanent(a, algorithm: str = "ryser") -> PermanentResult:
    """Dispatch to one of the permanent algorithms by name."""
    algorithm = str(algorithm).lower()
    if algorithm not in _ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {_ALGORITHMS}")
    a = as_square_matrix(a)
    if algorithm == "naive":
        value = permanent_naive(a)
    elif algorithm == "ryser":
        value = permanent_ryser(a)
    else:
        value = permanent_macmahon(a)
    return PermanentResult(value=value, algorithm=algorithm, dimension=a.shape[0])
