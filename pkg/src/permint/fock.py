"""Output amplitudes and distributions of n photons through an m-mode network.

The input state is hard-fixed to one photon in each of modes ``1..n`` and
vacuum elsewhere.  ``amplitude`` is the production path (a permanent of a
configuration submatrix over a factorial normalization); the independent
check is ``fock_oracle_amplitude``, which expands the output state term by
term over all ``m^n`` routings of the photons and never touches a permanent.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass

import numpy as np

from .linops import as_square_matrix, submatrix_for_output, validated_occupations
from .permanent import permanent_ryser

ORACLE_MAX_PHOTONS = 5
ORACLE_MAX_MODES = 8
DISTRIBUTION_MAX_ENTRIES = 10**6

# sqrt(t!) for t <= 20; every sqrt is accurate to one ulp even where t!
# itself exceeds 2^53.
_SQRT_FACTORIALS = tuple(math.sqrt(math.factorial(t)) for t in range(21))

CSV_HEADER = ("T", "re(amp)", "im(amp)", "prob")


@dataclass(frozen=True)
class DistributionEntry:
    occupations: tuple[int, ...]
    amplitude: complex
    probability: float


@dataclass(frozen=True)
class OutputDistribution:
    n: int
    m: int
    entries: tuple[DistributionEntry, ...]

    def total_probability(self) -> float:
        return float(sum(e.probability for e in self.entries))

    def probability_of(self, occupations) -> float:
        target = tuple(int(v) for v in occupations)
        for entry in self.entries:
            if entry.occupations == target:
                return entry.probability
        raise KeyError(f"configuration {target} not in distribution")


def enumerate_configurations(n: int, m: int) -> list[tuple[int, ...]]:
    """All ways to place n photons in m modes, lexicographically ordered."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    out: list[tuple[int, ...]] = []

    def fill(prefix: list[int], remaining: int, modes_left: int) -> None:
        if modes_left == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for count in range(remaining + 1):
            fill(prefix + [count], remaining - count, modes_left - 1)

    fill([], n, m)
    return out


def configuration_count(n: int, m: int) -> int:
    """C(n+m-1, n), the number of output configurations.

    Raises OverflowError once the exact count no longer fits a signed
    64-bit integer, rather than silently wrapping or rounding.
    """
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    count = math.comb(n + m - 1, n)
    if count >= 2**63:
        raise OverflowError(f"configuration count C({n + m - 1},{n}) = {count} exceeds 64-bit range")
    return count


def _sqrt_factorial_product(occupations) -> float:
    prod = 1.0
    for t in occupations:
        prod *= _SQRT_FACTORIALS[t] if t <= 20 else math.sqrt(float(math.factorial(t)))
    return prod


def amplitude(u, n: int, occupations) -> complex:
    """Transition amplitude to *occupations*: perm(U_T) / sqrt(T_1! ... T_m!)."""
    u = as_square_matrix(u)
    m = u.shape[0]
    if n > m:
        raise ValueError(f"photon number n={n} exceeds mode count m={m}")
    occ = validated_occupations(occupations, n, m)
    sub = submatrix_for_output(u, n, occ)
    return permanent_ryser(sub) / _sqrt_factorial_product(occ)


def fock_oracle_amplitude(u, n: int, occupations) -> complex:
    """Brute-force amplitude, bypassing permanents entirely.

    Expands prod_j (sum_k U[j,k] a_k^dag) |vac> over assignments of photons
    to modes (branches that would overfill a mode of T are pruned, which
    leaves exactly the maps whose occupation multiset equals T).  Each such
    assignment contributes prod_j U[j, f(j)]; the accumulated sum times
    sqrt(T_1! ... T_m!) (one sqrt(t!) per bosonic (a^dag)^t |0> = sqrt(t!) |t>)
    is the coefficient of |T>.
    """
    u = as_square_matrix(u)
    m = u.shape[0]
    if n > ORACLE_MAX_PHOTONS or m > ORACLE_MAX_MODES:
        raise ValueError(
            f"oracle limited to n <= {ORACLE_MAX_PHOTONS}, m <= {ORACLE_MAX_MODES}; got n={n}, m={m}"
        )
    if n > m:
        raise ValueError(f"photon number n={n} exceeds mode count m={m}")
    occ = validated_occupations(occupations, n, m)

    total = 0.0 + 0.0j
    counts = [0] * m

    def walk(photon: int, partial: complex) -> None:
        nonlocal total
        if photon == n:
            total += partial
            return
        for k in range(m):
            if counts[k] >= occ[k]:
                continue
            counts[k] += 1
            walk(photon + 1, partial * u[photon, k])
            counts[k] -= 1

    walk(0, 1.0 + 0.0j)
    return total * _sqrt_factorial_product(occ)


def output_distribution(u, n: int) -> OutputDistribution:
    """Amplitude and probability for every output configuration."""
    u = as_square_matrix(u)
    m = u.shape[0]
    if n > m:
        raise ValueError(f"photon number n={n} exceeds mode count m={m}")
    count = configuration_count(n, m)
    if count > DISTRIBUTION_MAX_ENTRIES:
        raise ValueError(
            f"distribution would have {count} entries, above the {DISTRIBUTION_MAX_ENTRIES} guard"
        )
    entries = []
    for occ in enumerate_configurations(n, m):
        amp = amplitude(u, n, occ)
        entries.append(DistributionEntry(occ, amp, abs(amp) ** 2))
    return OutputDistribution(n=n, m=m, entries=tuple(entries))


def distribution_to_csv(dist: OutputDistribution) -> str:
    """CSV table with columns ``T`` (space-separated occupations), re/im of the
    amplitude, and the probability."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for entry in dist.entries:
        writer.writerow(
            [
                " ".join(str(t) for t in entry.occupations),
                repr(entry.amplitude.real),
                repr(entry.amplitude.imag),
                repr(entry.probability),
            ]
        )
    return buf.getvalue()


def parse_distribution_csv(text: str) -> list[tuple[tuple[int, ...], complex, float]]:
    """Inverse of :func:`distribution_to_csv` (used by tests and the CLI)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {rows[0] if rows else 'empty file'}")
    parsed = []
    for row in rows[1:]:
        if not row:
            continue
        occ = tuple(int(v) for v in row[0].split())
        parsed.append((occ, complex(float(row[1]), float(row[2])), float(row[3])))
    return parsed
