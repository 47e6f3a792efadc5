"""Discrete groups of ball automorphisms and their series.

Group elements are (n+1) x (n+1) complex matrices preserving the Hermitian
form diag(1, ..., 1, -1); they act on the ball by the projective fractional
map (A z + b) / (c.z + d) read off the block structure.  For n = 1 the
(a, b) parametrization with |a|^2 - |b|^2 = 1 embeds as [[a, b], [conj b,
conj a]].

Word enumeration is breadth-first over freely reduced words with action
based deduplication, so finite-order collisions collapse to one element.

The two-point series summed over a group orbit,

    sum_gamma sum_j (gamma_j(z) - gamma_j(w))^N,

is exactly invariant under the simultaneous action of any group element on
(z, w): composing with a fixed element permutes the summands.  An optional
per-element damping factor (1 - |gamma^{-1}(0)|^2)^(N/2) is available for
convergence experiments; it is off by default because it breaks the exact
permutation invariance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import ball
from .sampling import probe_points

__all__ = [
    "GroupElement",
    "WordEnumerator",
    "enumerate_words",
    "act",
    "complex_jacobian",
    "poincare_series_f",
    "poincare_series_function",
    "classic_poincare_series",
    "jacobian_inequality_residual",
    "invariance_residual",
]

FORM_TOL = 1e-10


def _form(n: int) -> np.ndarray:
    J = np.eye(n + 1, dtype=complex)
    J[n, n] = -1.0
    return J


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A ball automorphism given by a form-preserving matrix.

    word records how the element was produced by the enumerator (empty for
    directly constructed elements); word_length is its reduced length.
    """

    matrix: np.ndarray
    word: str = ""

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
            raise ValueError("matrix must be square of size n+1 >= 2")
        J = _form(M.shape[0] - 1)
        resid = float(np.max(np.abs(M.conj().T @ J @ M - J)))
        # scale-aware: the residual of a long product grows like |M|^2 eps
        scale = max(1.0, float(np.max(np.abs(M))) ** 2)
        if resid > FORM_TOL * scale:
            raise ValueError(f"matrix does not preserve the form: residual {resid:.3e}")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def from_ab(cls, a: complex, b: complex, word: str = "") -> "GroupElement":
        """n = 1 shortcut; requires |a|^2 - |b|^2 = 1."""
        return cls(np.array([[a, b], [np.conjugate(b), np.conjugate(a)]]), word)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(np.eye(n + 1, dtype=complex), "")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def word_length(self) -> int:
        return len(self.word)

    def inverse(self) -> "GroupElement":
        J = _form(self.n)
        return GroupElement(J @ self.matrix.conj().T @ J, _invert_word(self.word))

    def compose(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, self.word + other.word)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return self.compose(other)

    def act(self, z) -> np.ndarray:
        return act(self, z)

    def jacobian_matrix(self, z) -> np.ndarray:
        """Holomorphic differential of the action, shape (..., n, n)."""
        zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
        n = self.n
        A = self.matrix[:n, :n]
        b = self.matrix[:n, n]
        c = self.matrix[n, :n]
        d = self.matrix[n, n]
        den = np.einsum("k,...k->...", c, zc) + d
        num = np.einsum("kl,...l->...k", A, zc) + b
        return A / den[..., None, None] - num[..., :, None] * c[..., None, :] / den[..., None, None] ** 2

    def jacobian_det(self, z) -> np.ndarray:
        return complex_jacobian(self, z)


def _invert_word(word: str) -> str:
    return word[::-1].swapcase()


def act(gamma: GroupElement, z) -> np.ndarray:
    """Apply the fractional-linear action to a point or batch (..., n)."""
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = gamma.n
    A = gamma.matrix[:n, :n]
    b = gamma.matrix[:n, n]
    c = gamma.matrix[n, :n]
    d = gamma.matrix[n, n]
    den = np.einsum("k,...k->...", c, zc) + d
    num = np.einsum("kl,...l->...k", A, zc) + b
    return num / den[..., None]


def complex_jacobian(gamma: GroupElement, z) -> np.ndarray:
    """Determinant of the holomorphic differential: det(M) (c.z + d)^-(n+1).

    Invariant under rescaling of the matrix representative.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = gamma.n
    c = gamma.matrix[n, :n]
    d = gamma.matrix[n, n]
    den = np.einsum("k,...k->...", c, zc) + d
    return np.linalg.det(gamma.matrix) * den ** (-(n + 1))


@dataclass(frozen=True)
class WordEnumerator:
    """Reduced-word enumeration plan over a generator list.

    Inverses are added automatically; emitted elements are deduplicated by
    comparing their actions on a fixed probe set, so the identity appears
    exactly once.
    """

    generators: list
    max_len: int
    dedup_tol: float = 1e-9

    def __post_init__(self):
        if self.max_len < 0:
            raise ValueError("max_len must be non-negative")
        ns = {g.n for g in self.generators}
        if len(ns) > 1:
            raise ValueError("generators must share one dimension")


def enumerate_words(enum: WordEnumerator, n: int | None = None) -> list:
    """All distinct elements from reduced words up to max_len.

    Breadth-first in word length, generators in their given order with the
    inverse immediately after each generator; no g g^-1 adjacency is
    produced, and action-equal elements are kept only once.
    """
    if enum.generators:
        n = enum.generators[0].n
    elif n is None:
        raise ValueError("dimension required when the generator list is empty")

    probes = probe_points(n)
    letters = []
    for i, g in enumerate(enum.generators):
        name = chr(ord("a") + i)
        letters.append((g if g.word else GroupElement(g.matrix, name), 2 * i + 1))
        ginv = g.inverse()
        letters.append((GroupElement(ginv.matrix, name.upper()), 2 * i))
    # letter index pairing: letters[2i] inverts letters[2i+1] and vice versa

    ident = GroupElement.identity(n)
    kept = [ident]
    kept_probe = [act(ident, probes).reshape(-1)]
    frontier = [(ident, -1)]

    def is_new(img) -> bool:
        arr = np.asarray(kept_probe)
        return bool(np.min(np.max(np.abs(arr - img), axis=1)) > enum.dedup_tol)

    for _ in range(enum.max_len):
        nxt = []
        for elem, last in frontier:
            for idx, (letter, inv_idx) in enumerate(letters):
                if idx == (last ^ 1) and last >= 0:
                    continue
                cand = elem @ letter
                nxt.append((cand, idx))
                img = act(cand, probes).reshape(-1)
                if is_new(img):
                    kept.append(cand)
                    kept_probe.append(img)
        frontier = nxt
    return kept


def poincare_series_f(
    elements: list,
    N: int,
    z,
    w,
    weighted: bool = False,
) -> tuple:
    """Truncated two-point series and a tail estimate.

    Returns (value, tail_estimate).  The tail estimate sums, over the
    longest-word shell present, n 2^N (1 - |gamma^{-1}(0)|^2)^(N/2), using
    the uniform bound 2 on each coordinate difference.  Convergence of the
    full series needs N at least n+1; smaller N only warns.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    wc = w.coords if isinstance(w, ball.Point) else np.asarray(w, dtype=complex)
    n = elements[0].n
    if N < n + 1:
        warnings.warn(f"series degree N={N} is below the convergence threshold n+1={n+1}")
    max_len = max(e.word_length for e in elements)
    origin = np.zeros(n, dtype=complex)

    total = np.zeros(np.broadcast_shapes(zc.shape[:-1], wc.shape[:-1]), dtype=complex)
    tail = 0.0
    for e in elements:
        term = np.sum((act(e, zc) - act(e, wc)) ** N, axis=-1)
        damp = 1.0 - float(np.sum(np.abs(act(e.inverse(), origin)) ** 2))
        if weighted:
            term = term * damp ** (N / 2.0)
        total = total + term
        if e.word_length == max_len:
            tail += n * 2.0**N * damp ** (N / 2.0)
    return total, tail


def poincare_series_function(elements: list, N: int, weighted: bool = False):
    """Vectorized closure (z, w) -> series value, for use as a holomorphic
    two-point function."""

    def f(z, w):
        return poincare_series_f(elements, N, z, w, weighted=weighted)[0]

    return f


def classic_poincare_series(elements: list, z) -> float:
    """Truncated sum of |complex Jacobian|^2 over the elements; a
    convergence barometer, monotone in the truncation."""
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    total = 0.0
    for e in elements:
        total += float(np.abs(complex_jacobian(e, zc)) ** 2)
    return total


def jacobian_inequality_residual(gamma: GroupElement, z, w) -> float:
    """rhs - lhs of the two-point Jacobian bound; non-negative for exact
    automorphisms up to rounding."""
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    wc = w.coords if isinstance(w, ball.Point) else np.asarray(w, dtype=complex)
    n = gamma.n
    origin = np.zeros(n, dtype=complex)
    damp = 1.0 - float(np.sum(np.abs(act(gamma.inverse(), origin)) ** 2))
    lhs = damp * np.sum(np.abs(act(gamma, zc) - act(gamma, wc)) ** 2, axis=-1)
    jz = np.abs(complex_jacobian(gamma, zc)) ** (2.0 / (n + 1))
    jw = np.abs(complex_jacobian(gamma, wc)) ** (2.0 / (n + 1))
    rhs = jz * jw * np.sum(np.abs(zc - wc) ** 2, axis=-1)
    return float(np.min(rhs - lhs))


def invariance_residual(f, gamma: GroupElement, z_samples, w_samples) -> float:
    """max |f(gamma z, gamma w) - f(z, w)| over the sample pairs.

    f is any callable on coordinate arrays (..., n); truncated series stay
    within a small multiple of their tail estimate.
    """
    zc = np.asarray(z_samples, dtype=complex)
    wc = np.asarray(w_samples, dtype=complex)
    fv = np.asarray(f(zc, wc))
    fg = np.asarray(f(act(gamma, zc), act(gamma, wc)))
    return float(np.max(np.abs(fg - fv)))
