"""Closed-form phase-space quantities for n photons behind an m-mode network.

Conventions.  Displacement amplitudes evolve with row-index sums,
``mu_j = sum_k lam_k U[j,k]``.  The Wigner/integral path contracts against
columns instead, ``beta_j = sum_k alpha_k U[k,j]``; the two differ by a
transpose, and |perm| of the top-left block is transpose-invariant, so the
probability under test is the same either way.  All outputs here are real
because every expression is built from squared moduli.
"""

from __future__ import annotations

import math

import numpy as np

from .linops import as_square_matrix

TWO_OVER_PI = 2.0 / math.pi


def as_phase_space_point(amplitudes) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1:
        raise ValueError(f"expected a 1-D amplitude vector, got ndim={vec.ndim}")
    if not np.all(np.isfinite(vec.real)) or not np.all(np.isfinite(vec.imag)):
        raise ValueError("phase-space amplitudes must be finite")
    return vec


def displaced_amplitudes(u, lam) -> np.ndarray:
    """Evolve displacement amplitudes through the network: mu_j = sum_k lam_k U[j,k]."""
    u = as_square_matrix(u)
    lam = as_phase_space_point(lam)
    if lam.shape[0] != u.shape[0]:
        raise ValueError(f"amplitude vector length {lam.shape[0]} != matrix dimension {u.shape[0]}")
    return u @ lam


def single_photon_overlap(lam: complex) -> float:
    """<1|D(lam)|1> = e^{-|lam|^2/2} (1 - |lam|^2)."""
    mag2 = abs(complex(lam)) ** 2
    return math.exp(-0.5 * mag2) * (1.0 - mag2)


def vacuum_overlap(lam: complex) -> float:
    """<0|D(lam)|0> = e^{-|lam|^2/2}."""
    return math.exp(-0.5 * abs(complex(lam)) ** 2)


def total_energy(lam) -> float:
    """sum_j |lam_j|^2."""
    lam = as_phase_space_point(lam)
    return float(np.sum(lam.real**2 + lam.imag**2))


def characteristic_function(u, n: int, lam) -> float:
    """e^{-E/2} prod_{j<=n} (1 - |mu_j|^2) with mu the evolved amplitudes.

    E is the total energy, identical for lam and mu since the network is
    unitary; the first n modes carry single photons, the rest vacuum.
    """
    u = as_square_matrix(u)
    _check_photon_count(n, u.shape[0])
    mu = displaced_amplitudes(u, lam)
    mag2 = mu.real**2 + mu.imag**2
    value = math.exp(-0.5 * float(np.sum(mag2)))
    for j in range(n):
        value *= 1.0 - float(mag2[j])
    return value


def wigner_closed_form(u, n: int, alpha) -> float:
    """(2/pi)^m e^{-2|alpha|^2} prod_{j<=n} (4 |sum_k alpha_k U[k,j]|^2 - 1)."""
    u = as_square_matrix(u)
    m = u.shape[0]
    _check_photon_count(n, m)
    alpha = as_phase_space_point(alpha)
    if alpha.shape[0] != m:
        raise ValueError(f"amplitude vector length {alpha.shape[0]} != matrix dimension {m}")
    beta = alpha @ u[:, :n]
    beta_mag2 = beta.real**2 + beta.imag**2
    value = TWO_OVER_PI**m * math.exp(-2.0 * total_energy(alpha))
    for j in range(n):
        value *= 4.0 * float(beta_mag2[j]) - 1.0
    return value


def number_kernel(alpha, n: int) -> float:
    """Symmetric-ordering kernel of n_1 ... n_n: prod_{j<=n} (|alpha_j|^2 - 1/2)."""
    alpha = as_phase_space_point(alpha)
    _check_photon_count(n, alpha.shape[0])
    mag2 = alpha.real**2 + alpha.imag**2
    value = 1.0
    for j in range(n):
        value *= float(mag2[j]) - 0.5
    return value


def _check_photon_count(n: int, m: int) -> None:
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
