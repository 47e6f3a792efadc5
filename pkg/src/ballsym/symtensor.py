"""Pointwise symmetric-power tensor algebra over multi-index tables.

Sections of the m-th symmetric power of the coframe are stored as sparse
coefficient tables keyed by multi-indices.  The module provides the
weighted inner product, the raising operator into one-form-valued tensors,
the curvature action, the eigenvalue ladder of repeated raising, and exact
substitution (pushforward) under a change of covector basis.

Coefficients may be floats, complex numbers, ints or fractions.Fraction;
all combinatorial weights are exact integers or rationals, so rational
inputs give exact rational results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "MultiIndex",
    "multi_indices",
    "mi_factorial",
    "SymCoeffs",
    "SymOneFormCoeffs",
    "sym_inner",
    "one_form_inner",
    "norm_sq",
    "one_form_norm_sq",
    "raising_RG",
    "curvature_action",
    "eigenvalue_E",
    "pushforward_sym",
    "coeffs_to_json",
    "coeffs_from_json",
]

MultiIndex = tuple


def multi_indices(n: int, degree: int) -> list:
    """All multi-indices of the given total degree, in graded colex order.

    Colex: indices are ordered by their reversed tuples, so for n = 2,
    degree 2 the order is (2,0), (1,1), (0,2).  The order is part of the
    serialization contract and must not change.
    """
    if n < 1 or degree < 0:
        raise ValueError("need n >= 1 and degree >= 0")

    def compositions(total, slots):
        if slots == 1:
            yield (total,)
            return
        for last in range(total + 1):
            for head in compositions(total - last, slots - 1):
                yield head + (last,)

    return sorted(compositions(degree, n), key=lambda I: I[::-1])


def mi_factorial(I) -> int:
    """I! as an exact integer (arbitrary precision)."""
    out = 1
    for i in I:
        if i < 0:
            raise ValueError("multi-index entries must be non-negative")
        out *= math.factorial(i)
    return out


def _conj(v):
    return v.conjugate() if hasattr(v, "conjugate") else v


@dataclass(frozen=True, eq=False)
class SymCoeffs:
    """Degree-m symmetric tensor coefficients in a tagged covector frame.

    frame is 'e' (orthonormal moving coframe) or 'dz' (coordinate
    differentials).  Missing keys mean zero.
    """

    degree: int
    frame: str
    coeff: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.frame not in ("e", "dz"):
            raise ValueError("frame must be 'e' or 'dz'")
        for I in self.coeff:
            if sum(I) != self.degree:
                raise ValueError(f"index {I} has degree {sum(I)} != {self.degree}")

    @property
    def n(self) -> int:
        for I in self.coeff:
            return len(I)
        raise ValueError("empty table has no dimension")

    def get(self, I):
        return self.coeff.get(tuple(I), 0)

    def scaled(self, c) -> "SymCoeffs":
        return SymCoeffs(self.degree, self.frame, {I: c * v for I, v in self.coeff.items()})


@dataclass(frozen=True, eq=False)
class SymOneFormCoeffs:
    """Coefficients of a symmetric tensor tensored with a conjugate covector.

    Keys are (multi-index, slot) pairs where slot indexes the conjugate
    coframe direction.
    """

    degree: int
    frame: str
    coeff: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.frame not in ("e", "dz"):
            raise ValueError("frame must be 'e' or 'dz'")
        for I, _mu in self.coeff:
            if sum(I) != self.degree:
                raise ValueError(f"index {I} has degree {sum(I)} != {self.degree}")

    def get(self, I, mu):
        return self.coeff.get((tuple(I), mu), 0)

    def slot(self, mu: int) -> SymCoeffs:
        """The degree-m coefficient table paired with conjugate slot mu."""
        return SymCoeffs(
            self.degree, self.frame, {I: v for (I, m), v in self.coeff.items() if m == mu}
        )


def _check_match(u, v):
    if u.degree != v.degree:
        raise ValueError(f"degree mismatch: {u.degree} vs {v.degree}")
    if u.frame != v.frame:
        raise ValueError(f"frame mismatch: {u.frame} vs {v.frame}")


def sym_inner(u: SymCoeffs, v: SymCoeffs):
    """Hermitian pairing sum_I (I!/m!) u_I conj(v_I).

    In the 'e' frame this is the metric-induced inner product on the
    m-th symmetric power; exact for rational inputs.
    """
    _check_match(u, v)
    m_fact = math.factorial(u.degree)
    total = 0
    for I, uv in u.coeff.items():
        vv = v.coeff.get(I)
        if vv is None:
            continue
        total += Fraction(mi_factorial(I), m_fact) * (uv * _conj(vv))
    return total


def norm_sq(u: SymCoeffs):
    return sym_inner(u, u)


def one_form_inner(u: SymOneFormCoeffs, v: SymOneFormCoeffs):
    """Slotwise sum of symmetric pairings; the conjugate coframe is
    orthonormal so slots do not mix."""
    _check_match(u, v)
    m_fact = math.factorial(u.degree)
    total = 0
    for (I, mu), uv in u.coeff.items():
        vv = v.coeff.get((I, mu))
        if vv is None:
            continue
        total += Fraction(mi_factorial(I), m_fact) * (uv * _conj(vv))
    return total


def one_form_norm_sq(u: SymOneFormCoeffs):
    return one_form_inner(u, u)


def _bump(I, j, by=1):
    out = list(I)
    out[j] += by
    return tuple(out)


def raising_RG(u: SymCoeffs) -> SymOneFormCoeffs:
    """Raising operator: multiply by each coframe covector and pair it with
    the matching conjugate slot.

    Output degree m+1; the coefficient at (K, mu) is u at K minus one in
    slot mu (zero when K_mu = 0).  Requires the 'e' frame, where the
    covectors are orthonormal.
    """
    if u.frame != "e":
        raise ValueError("raising operator is defined against the orthonormal 'e' frame")
    out: dict = {}
    for I, v in u.coeff.items():
        for mu in range(len(I)):
            key = (_bump(I, mu), mu)
            out[key] = out.get(key, 0) + v
    return SymOneFormCoeffs(u.degree + 1, "e", out)


def curvature_action(u: SymCoeffs) -> SymOneFormCoeffs:
    """Distribute the coframe curvature over each symmetric factor.

    The curvature endomorphism of one covector e_j contributes, per unit
    factor, e_a in slot a (for every a) plus e_r in slot r for every r;
    both land at index I + eps_a.  Summed over the factors of e^I this
    equals 2m times the raising operator, which is asserted by tests, not
    used here.
    """
    if u.frame != "e":
        raise ValueError("curvature action is defined against the orthonormal 'e' frame")
    n = None
    out: dict = {}
    for I, v in u.coeff.items():
        n = len(I)
        for j in range(n):
            if I[j] == 0:
                continue
            w = v * I[j]
            # factor e_j replaced through the endomorphism: e_j ⊗ (e_j ∧ ē_a)
            # part puts e_a into the symmetric slot, the trace part re-inserts
            # e_j and adds e_r ⊗ ē_r; both give index I + eps_a.
            for a in range(n):
                key = (_bump(I, a), a)
                out[key] = out.get(key, 0) + w
            for r in range(n):
                key = (_bump(I, r), r)
                out[key] = out.get(key, 0) + w
    return SymOneFormCoeffs(u.degree + 1, "e", out)


def eigenvalue_E(N: int, m: int) -> int:
    """Eigenvalue shift accumulated by m raisings above a holomorphic
    section of degree N: m(2N + m - 1), exactly."""
    if N < 1 or m < 0:
        raise ValueError("need N >= 1 and m >= 0")
    return m * (2 * N + m - 1)


def _row_power(row, p: int, n: int) -> dict:
    """Expansion of (sum_k row[k] x_k)^p as {multi-index: coefficient}."""
    out = {}
    p_fact = math.factorial(p)
    for beta in multi_indices(n, p):
        coeff = p_fact
        val = 1
        skip = False
        for k, b in enumerate(beta):
            if b == 0:
                continue
            rk = row[k]
            if rk == 0:
                skip = True
                break
            coeff //= math.factorial(b)
            val = val * rk**b
        if skip:
            continue
        out[beta] = coeff * val
    return out


def _table_mul(a: dict, b: dict) -> dict:
    out = {}
    for I, va in a.items():
        for J, vb in b.items():
            K = tuple(i + j for i, j in zip(I, J))
            out[K] = out.get(K, 0) + va * vb
    return out


def pushforward_sym(M, u: SymCoeffs, frame: str | None = None) -> SymCoeffs:
    """Substitute covector j by sum_k M[j][k] (new covector k), exactly.

    Expands each power with exact multinomial coefficients and collects.
    Substituting with the coframe matrix converts 'e'-frame coefficients
    to 'dz'-frame ones.  Applying M1 then M2 equals applying M1 @ M2 in
    one step.
    """
    if isinstance(M, np.ndarray):
        rows = [list(M[j]) for j in range(M.shape[0])]
    else:
        rows = [list(r) for r in M]
    n = len(rows)
    out: dict = {}
    cache: dict = {}
    for I, v in u.coeff.items():
        if len(I) != n:
            raise ValueError("matrix dimension does not match multi-index length")
        term = {tuple([0] * n): 1}
        for j, p in enumerate(I):
            if p == 0:
                continue
            key = (j, p)
            if key not in cache:
                cache[key] = _row_power(rows[j], p, n)
            term = _table_mul(term, cache[key])
        for K, w in term.items():
            out[K] = out.get(K, 0) + v * w
    out = {K: w for K, w in out.items() if not _is_zero(w)}
    return SymCoeffs(u.degree, frame or u.frame, out)


def _is_zero(v) -> bool:
    try:
        return v == 0
    except Exception:
        return False


def coeffs_to_json(u) -> dict:
    """Serialize a coefficient table; entries are listed in graded colex
    order of the index (and slot order for one-form tables)."""
    if isinstance(u, SymCoeffs):
        entries = sorted(u.coeff.items(), key=lambda kv: kv[0][::-1])
        return {
            "degree": u.degree,
            "frame": u.frame,
            "entries": [[list(I), float(np.real(complex(v))), float(np.imag(complex(v)))] for I, v in entries],
        }
    entries = sorted(u.coeff.items(), key=lambda kv: (kv[0][0][::-1], kv[0][1]))
    return {
        "degree": u.degree,
        "frame": u.frame,
        "kind": "one_form",
        "entries": [
            [list(I), mu, float(np.real(complex(v))), float(np.imag(complex(v)))]
            for (I, mu), v in entries
        ],
    }


def coeffs_from_json(obj: dict):
    if obj.get("kind") == "one_form":
        coeff = {(tuple(e[0]), int(e[1])): complex(e[2], e[3]) for e in obj["entries"]}
        return SymOneFormCoeffs(int(obj["degree"]), obj["frame"], coeff)
    coeff = {tuple(e[0]): complex(e[1], e[2]) for e in obj["entries"]}
    return SymCoeffs(int(obj["degree"]), obj["frame"], coeff)
