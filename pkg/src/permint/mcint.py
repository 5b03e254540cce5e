"""Monte-Carlo evaluation of the phase-space integrals behind |perm(U)|^2.

The estimand throughout is P = |perm(U[:n,:n])|^2, written as a Gaussian
integral over m (or n) complex modes.  Four algebraically equivalent forms
of that integral are implemented; agreement between their Monte-Carlo
estimates and the directly computed permanent is the core cross-check this
package exists for.

Sampling is importance sampling with the integrand's own Gaussian weight:
each complex component is drawn with density (2/pi) e^{-2|a|^2} (real and
imaginary parts independent N(0, 1/4)), so the estimator just averages the
residual polynomial factors.

Determinism contract: estimates depend only on (U, n, form, n_samples,
seed) — never on the number of workers.  Samples are split into fixed-size
chunks, chunk i draws from an independent substream spawned from (seed, i),
per-chunk moments are merged pairwise in chunk order, and all kernels use
fixed-order contractions (einsum / pairwise sums), so every float operation
happens in the same order regardless of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .linops import as_square_matrix
from .permanent import permanent_ryser

CHUNK_SIZE = 1 << 16
MIN_SAMPLES = 10**3
MAX_WORKERS = 64

# axis standard deviations: matched sampler has density (2/pi) e^{-2|a|^2}
# per component; the identity checks deliberately sample from the wider
# (1/pi) e^{-|a|^2} and carry the weight pi e^{-|a|^2} explicitly, so that
# e.g. the pi/2 check has nonzero variance instead of estimating a constant.
_MATCHED_STD = 0.5
_IDENTITY_STD = math.sqrt(0.5)

IDENTITY_REFERENCES = {
    "IDZER": 0.0,
    "IDPI": math.pi / 2.0,
    "IDZER2": 0.0,
    "IDPI2": math.pi / 8.0,
}


class IntegralForm(str, Enum):
    """The four equivalent integral representations of P.

    FULL         m-dim integral, column sums over all k = 1..m, (-1) terms kept.
    TRUNCATED    m-dim, column sums truncated to k = 1..n.
    NO_CONSTANT  m-dim, (-1) terms dropped, compensating 4^n prefactor.
    REDUCED      n-dim, modes beyond n integrated out, (8/pi)^n prefactor.
    """

    FULL = "FULL"
    TRUNCATED = "TRUNCATED"
    NO_CONSTANT = "NO_CONSTANT"
    REDUCED = "REDUCED"


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    form: str

    def to_dict(self) -> dict:
        return {
            "form": self.form,
            "mean": self.mean,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CrossFormReport:
    """All four form estimates next to the Ryser reference value."""

    reference: float
    estimates: dict[str, MCEstimate]
    z_scores: dict[str, float]
    pairwise_z: dict[str, float]

    def max_abs_z(self) -> float:
        return max(abs(z) for z in self.z_scores.values())

    def passed(self, threshold: float = 4.0) -> bool:
        return all(abs(z) <= threshold for z in self.z_scores.values())

    def to_dict(self) -> dict:
        forms = []
        for tag, est in self.estimates.items():
            record = est.to_dict()
            record["reference"] = self.reference
            record["z"] = self.z_scores[tag]
            forms.append(record)
        return {"reference": self.reference, "forms": forms, "pairwise_z": dict(self.pairwise_z)}


def sample_gaussian_phase_space(m: int, stream: np.random.Generator) -> np.ndarray:
    """One phase-space point: m components with density (2/pi) e^{-2|a|^2} each."""
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    return _gaussian_block(stream, 1, m, _MATCHED_STD)[0]


def mc_probability(u, n: int, form, n_samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Importance-sampled estimate of P = |perm(U[:n,:n])|^2 in the given form."""
    u = as_square_matrix(u)
    m = u.shape[0]
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    if not isinstance(form, IntegralForm):
        form = IntegralForm(str(form).upper())
    dim, evaluate = _form_evaluator(u, n, form)
    mean, std_error = _run_estimator(n_samples, seed, dim, _MATCHED_STD, evaluate, workers, form.value)
    return MCEstimate(mean=mean, std_error=std_error, n_samples=n_samples, seed=seed, form=form.value)


def verify_identity(which: str, n_samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Monte-Carlo check of one single-mode Gaussian identity.

    IDZER   int e^{-2|a|^2} (|a|^2 - 1/2) d^2a                 = 0
    IDPI    int e^{-2|a|^2} d^2a                               = pi/2
    IDZER2  int e^{-2|a|^2} a^2 (|a|^2 - 1/2) d^2a             = 0  (real part)
    IDPI2   int e^{-2|a|^2} |a|^2 (|a|^2 - 1/2) d^2a           = pi/8
    """
    tag = str(which).upper()
    if tag not in IDENTITY_REFERENCES:
        raise ValueError(f"unknown identity {which!r}, expected one of {sorted(IDENTITY_REFERENCES)}")
    evaluate = _identity_evaluator(tag)
    mean, std_error = _run_estimator(n_samples, seed, 1, _IDENTITY_STD, evaluate, workers, tag)
    return MCEstimate(mean=mean, std_error=std_error, n_samples=n_samples, seed=seed, form=tag)


def identity_reference(which: str) -> float:
    return IDENTITY_REFERENCES[str(which).upper()]


def analytic_permutation_probability(mapping, n: int) -> float:
    """Exact separable evaluation of P for a permutation network.

    Every mode factorizes, so P is a product of single-mode Gaussian
    integrals, each a rational multiple of a power of pi; the product is
    evaluated in exact rational arithmetic.  Depending on which of the
    Wigner factor (4|a|^2-1) and number-kernel factor (|a|^2-1/2) a mode
    carries, its integral is:

        both factors -> pi/2        Wigner factor only -> pi/2
        kernel only  -> 0           neither (vacuum)   -> pi/2

    With the (2/pi) weight per mode the product is exactly 1 whenever the
    permutation maps {1..n} onto {1..n} (so every kernel factor is paired),
    and exactly 0 otherwise — matching |perm| of the top-left block either
    way.
    """
    mapping = [int(v) for v in mapping]
    m = len(mapping)
    if sorted(mapping) != list(range(1, m + 1)):
        raise ValueError(f"mapping {mapping} is not a bijection on 1..{m}")
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    # mode k feeds output mapping[k]; Wigner factors land on the modes that
    # feed outputs 1..n, kernel factors on modes 1..n themselves
    wigner_modes = {k for k in range(m) if mapping[k] <= n}
    coeff = Fraction(1)
    pi_power = 0
    for k in range(m):
        coeff *= 2          # (2/pi) weight prefactor, one per mode
        pi_power -= 1
        wigner = k in wigner_modes
        kernel = k < n
        if kernel and not wigner:
            coeff *= 0      # IDZER: unpaired kernel factor integrates to 0
        else:
            coeff *= Fraction(1, 2)
            pi_power += 1   # pi/2 for every other factor combination
    return float(coeff) * math.pi**pi_power


def cross_form_report(u, n: int, n_samples: int, seed: int, workers: int = 1) -> CrossFormReport:
    """Run all four integral forms against the Ryser reference value."""
    u = as_square_matrix(u)
    if not 0 <= n <= u.shape[0]:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={u.shape[0]}")
    reference = float(abs(permanent_ryser(u[:n, :n])) ** 2)
    estimates: dict[str, MCEstimate] = {}
    z_scores: dict[str, float] = {}
    for form in IntegralForm:
        est = mc_probability(u, n, form, n_samples, seed, workers)
        estimates[form.value] = est
        z_scores[form.value] = _z_score(est.mean - reference, est.std_error)
    pairwise: dict[str, float] = {}
    tags = [form.value for form in IntegralForm]
    for i, a in enumerate(tags):
        for b in tags[i + 1 :]:
            ea, eb = estimates[a], estimates[b]
            se = math.hypot(ea.std_error, eb.std_error)
            pairwise[f"{a}/{b}"] = _z_score(ea.mean - eb.mean, se)
    return CrossFormReport(reference=reference, estimates=estimates, z_scores=z_scores, pairwise_z=pairwise)


def _z_score(diff: float, std_error: float) -> float:
    if std_error > 0.0:
        return float(diff / std_error)
    return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)


def _gaussian_block(rng: np.random.Generator, count: int, dim: int, axis_std: float) -> np.ndarray:
    re = rng.standard_normal((count, dim))
    im = rng.standard_normal((count, dim))
    return axis_std * (re + 1j * im)


def _form_evaluator(u, n, form):
    """Residual integrand (weight already absorbed) and sampling dimension."""
    m = u.shape[0]
    if form is IntegralForm.REDUCED:
        block = np.ascontiguousarray(u[:n, :n])
        scale = 4.0**n

        def evaluate(alpha: np.ndarray) -> np.ndarray:
            beta = np.einsum("sk,kj->sj", alpha, block)
            beta_sq = beta.real**2 + beta.imag**2
            alpha_sq = alpha.real**2 + alpha.imag**2
            return scale * np.prod(beta_sq, axis=1) * np.prod(alpha_sq - 0.5, axis=1)

        return n, evaluate

    if form is IntegralForm.FULL:
        cols = np.ascontiguousarray(u[:, :n])
    else:
        cols = np.ascontiguousarray(u[:n, :n])

    if form is IntegralForm.NO_CONSTANT:
        scale = 4.0**n

        def evaluate(alpha: np.ndarray) -> np.ndarray:
            beta = np.einsum("sk,kj->sj", alpha[:, : cols.shape[0]], cols)
            beta_sq = beta.real**2 + beta.imag**2
            head = alpha[:, :n]
            alpha_sq = head.real**2 + head.imag**2
            return scale * np.prod(beta_sq, axis=1) * np.prod(alpha_sq - 0.5, axis=1)

        return m, evaluate

    def evaluate(alpha: np.ndarray) -> np.ndarray:
        beta = np.einsum("sk,kj->sj", alpha[:, : cols.shape[0]], cols)
        beta_sq = beta.real**2 + beta.imag**2
        head = alpha[:, :n]
        alpha_sq = head.real**2 + head.imag**2
        return np.prod(4.0 * beta_sq - 1.0, axis=1) * np.prod(alpha_sq - 0.5, axis=1)

    return m, evaluate


def _identity_evaluator(tag):
    def evaluate(alpha: np.ndarray) -> np.ndarray:
        a = alpha[:, 0]
        mag_sq = a.real**2 + a.imag**2
        weight = math.pi * np.exp(-mag_sq)
        if tag == "IDPI":
            return weight
        kernel = mag_sq - 0.5
        if tag == "IDZER":
            return weight * kernel
        if tag == "IDPI2":
            return weight * mag_sq * kernel
        # IDZER2: the integrand carries a^2, so it is complex with both parts
        # integrating to zero; the estimate tracks the real part.
        return weight * (a.real**2 - a.imag**2) * kernel

    return evaluate


def _chunk_lengths(n_samples: int) -> list[int]:
    full, rem = divmod(n_samples, CHUNK_SIZE)
    lengths = [CHUNK_SIZE] * full
    if rem:
        lengths.append(rem)
    return lengths


def _chunk_moments(values: np.ndarray) -> tuple[int, float, float]:
    count = values.shape[0]
    mean = float(np.mean(values))
    m2 = float(np.sum((values - mean) ** 2))
    return count, mean, m2


def _merge_moments(a, b):
    count_a, mean_a, m2_a = a
    count_b, mean_b, m2_b = b
    count = count_a + count_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (count_b / count)
    m2 = m2_a + m2_b + delta * delta * (count_a * count_b / count)
    return count, mean, m2


def _reduce_pairwise(moments):
    while len(moments) > 1:
        merged = [
            _merge_moments(moments[i], moments[i + 1]) for i in range(0, len(moments) - 1, 2)
        ]
        if len(moments) % 2:
            merged.append(moments[-1])
        moments = merged
    return moments[0]


def _run_estimator(n_samples, seed, dim, axis_std, evaluate, workers, label):
    n_samples = int(n_samples)
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must lie in [0, 2^64), got {seed}")
    workers = int(workers)
    if not 1 <= workers <= MAX_WORKERS:
        raise ValueError(f"workers must lie in [1, {MAX_WORKERS}], got {workers}")

    lengths = _chunk_lengths(n_samples)
    children = np.random.SeedSequence(seed).spawn(len(lengths))

    def run_chunk(index: int) -> tuple[int, float, float]:
        rng = np.random.Generator(np.random.PCG64(children[index]))
        alpha = _gaussian_block(rng, lengths[index], dim, axis_std)
        values = evaluate(alpha)
        if not np.all(np.isfinite(values)):
            raise FloatingPointError(f"non-finite Monte-Carlo sample in chunk {index} ({label})")
        return _chunk_moments(values)

    if workers == 1 or len(lengths) == 1:
        moments = [run_chunk(i) for i in range(len(lengths))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            moments = list(pool.map(run_chunk, range(len(lengths))))

    count, mean, m2 = _reduce_pairwise(moments)
    if count > 1:
        std_error = math.sqrt(m2 / (count - 1) / count)
    else:
        std_error = 0.0
    return float(mean), float(std_error)
