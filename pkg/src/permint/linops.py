"""Dense complex linear algebra for interferometer networks.

Everything here works on plain ``numpy`` arrays of dtype complex128.  The
helpers cover the matrix plumbing the rest of the package needs: validated
construction, unitarity checks, Haar-random and permutation unitaries, the
output-configuration submatrix used by permanent formulas, and a small JSON
wire format for moving matrices between the CLI and the service.
"""

from __future__ import annotations

import json
import os

import numpy as np

DEFAULT_UNITARITY_TOL = 1e-12


def as_complex_matrix(data) -> np.ndarray:
    """Coerce *data* to a 2-D complex128 array, rejecting NaN/inf entries."""
    mat = np.asarray(data, dtype=complex)
    if mat.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("matrix entries must be finite")
    return mat


def as_square_matrix(data) -> np.ndarray:
    mat = as_complex_matrix(data)
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def unitarity_defect(u) -> float:
    """Max-norm deviation of ``u.conj().T @ u`` from the identity."""
    u = as_square_matrix(u)
    gram = u.conj().T @ u
    return float(np.max(np.abs(gram - np.eye(u.shape[0]))))


def check_unitarity(u, tol: float = DEFAULT_UNITARITY_TOL) -> bool:
    """True when the Gram defect of *u* is within *tol*."""
    return unitarity_defect(u) <= tol


def haar_random_unitary(m: int, seed: int) -> np.ndarray:
    """Draw an ``m x m`` unitary from the Haar (circular unitary) ensemble.

    QR of a complex Ginibre matrix, with the Q columns rephased by the signs
    of R's diagonal so the factorization is the canonical one.  Without that
    correction the raw Q is not Haar distributed.  Fully determined by
    *seed*.
    """
    if m < 1:
        raise ValueError(f"matrix dimension must be >= 1, got {m}")
    rng = np.random.Generator(np.random.PCG64(_validated_seed(seed)))
    ginibre = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(ginibre)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def permutation_unitary(mapping) -> np.ndarray:
    """Unitary routing input mode ``j`` to output mode ``mapping[j-1]``.

    *mapping* lists the images of modes ``1..m`` (1-based) and must be a
    bijection on ``{1..m}``.  Row ``j`` of the result has its single 1 in
    column ``mapping[j-1]`` (row = input mode, column = output mode).
    """
    mapping = [int(v) for v in mapping]
    m = len(mapping)
    if m < 1:
        raise ValueError("permutation mapping must be non-empty")
    if sorted(mapping) != list(range(1, m + 1)):
        raise ValueError(f"mapping {mapping} is not a bijection on 1..{m}")
    u = np.zeros((m, m), dtype=complex)
    for row, col in enumerate(mapping):
        u[row, col - 1] = 1.0
    return u


def submatrix_for_output(u, n: int, occupations) -> np.ndarray:
    """The ``n x n`` matrix whose permanent gives the transition amplitude.

    Rows ``1..n`` of *u* (the occupied input modes), with column ``k``
    repeated ``occupations[k-1]`` times, columns ordered by nondecreasing
    ``k``.
    """
    u = as_square_matrix(u)
    m = u.shape[0]
    occ = validated_occupations(occupations, n, m)
    cols = [k for k in range(m) for _ in range(occ[k])]
    return u[np.ix_(range(n), cols)]


def matrix_to_json_dict(u) -> dict:
    """Row-major JSON form: ``{"rows": r, "cols": c, "entries": [[re, im], ...]}``."""
    mat = as_complex_matrix(u)
    entries = [[float(z.real), float(z.imag)] for z in mat.ravel(order="C")]
    return {"rows": mat.shape[0], "cols": mat.shape[1], "entries": entries}


def matrix_from_json_dict(doc: dict) -> np.ndarray:
    try:
        rows = int(doc["rows"])
        cols = int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix document missing field: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(entries):
        if len(pair) != 2:
            raise ValueError(f"entry {i} is not a [re, im] pair: {pair!r}")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_complex_matrix(flat.reshape(rows, cols))


def save_matrix(path: str | os.PathLike, u) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json_dict(u), fh, indent=1)
        fh.write("\n")


def load_matrix(path: str | os.PathLike) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    return matrix_from_json_dict(doc)


def _validated_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must lie in [0, 2^64), got {seed}")
    return seed


def validated_occupations(occupations, n: int, m: int) -> tuple[int, ...]:
    occ = tuple(int(v) for v in occupations)
    if any(int(v) != v for v in occupations):
        raise ValueError(f"occupation numbers must be integers: {occupations!r}")
    if len(occ) != m:
        raise ValueError(f"expected {m} occupation numbers, got {len(occ)}")
    if any(v < 0 for v in occ):
        raise ValueError(f"occupation numbers must be >= 0: {occ}")
    if sum(occ) != n:
        raise ValueError(f"occupations {occ} sum to {sum(occ)}, expected {n}")
    return occ
