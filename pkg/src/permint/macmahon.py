"""Permanent as a polynomial coefficient: a third, independent oracle.

Expand ``prod_{j=1}^n sum_{k=1}^n U[k,j] x_k`` as a multilinear polynomial;
the coefficient of ``x_1 x_2 ... x_n`` is exactly ``perm(U[:n,:n])``.  Terms
with any squared variable can be dropped *during* the multiplication (they
can never contribute to the all-ones monomial), which caps the expansion at
2^n terms and makes n <= 12 comfortable.

Exponent multi-indices are packed as bitmasks: bit k set means x_k appears
with exponent 1.  Multiplying two multilinear terms is then a disjointness
check plus a bitwise or.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linops import as_square_matrix

MAX_FORMS = 12
PRUNE_TOL = 1e-15


@dataclass
class SparsePolynomial:
    """Multilinear polynomial in ``n_vars`` variables, bitmask -> coefficient."""

    n_vars: int
    terms: dict[int, complex] = field(default_factory=dict)

    def coefficient(self, variables) -> complex:
        """Coefficient of the monomial over an iterable of variable indices (0-based)."""
        mask = 0
        for v in variables:
            bit = 1 << int(v)
            if mask & bit:
                raise ValueError("multilinear polynomial: repeated variable in monomial")
            mask |= bit
        return self.terms.get(mask, 0.0 + 0.0j)

    def __len__(self) -> int:
        return len(self.terms)


def build_linear_forms(u, n: int) -> list[SparsePolynomial]:
    """Degree-1 polynomials, form j carrying coefficient U[k,j] on variable k."""
    u = as_square_matrix(u)
    if n > u.shape[0]:
        raise ValueError(f"n={n} exceeds matrix dimension {u.shape[0]}")
    forms = []
    for j in range(n):
        terms = {}
        for k in range(n):
            coeff = complex(u[k, j])
            if abs(coeff) > PRUNE_TOL:
                terms[1 << k] = coeff
        forms.append(SparsePolynomial(n_vars=n, terms=terms))
    return forms


def expand_multilinear(forms) -> SparsePolynomial:
    """Product of linear forms, discarding any term with a squared variable."""
    forms = list(forms)
    if len(forms) > MAX_FORMS:
        raise ValueError(f"refusing to expand {len(forms)} forms (limit {MAX_FORMS})")
    n_vars = max((f.n_vars for f in forms), default=0)
    product = SparsePolynomial(n_vars=n_vars, terms={0: 1.0 + 0.0j})
    for form in forms:
        next_terms: dict[int, complex] = {}
        for mask, coeff in product.terms.items():
            for var_bit, form_coeff in form.terms.items():
                if mask & var_bit:
                    continue  # x_k^2 term: integrates to zero downstream
                new_mask = mask | var_bit
                next_terms[new_mask] = next_terms.get(new_mask, 0.0 + 0.0j) + coeff * form_coeff
        product = SparsePolynomial(
            n_vars=n_vars,
            terms={m: c for m, c in next_terms.items() if abs(c) > PRUNE_TOL},
        )
    return product


def permanent_via_macmahon(u, n: int) -> complex:
    """perm(U[:n,:n]) read off as the coefficient of x_1 ... x_n."""
    u = as_square_matrix(u)
    if n > MAX_FORMS:
        raise ValueError(f"coefficient extraction limited to n <= {MAX_FORMS}, got n={n}")
    if n > u.shape[0]:
        raise ValueError(f"n={n} exceeds matrix dimension {u.shape[0]}")
    if n == 0:
        return complex(1.0)
    product = expand_multilinear(build_linear_forms(u, n))
    return complex(product.terms.get((1 << n) - 1, 0.0 + 0.0j))
