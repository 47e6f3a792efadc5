"""Exact rational sequences for the weighted-norm analysis.

Everything here is integer or Fraction arithmetic: normalization constants,
monomial moments over the ball, the squared-norm ladder generated by
repeated raising and minimal-solution steps, the ratio sequence a_l with
its Raabe and Gauss convergence diagnostics, and the tail bound scalars.

Gamma-function ratios at rationally shifted arguments are expanded as
Pochhammer products, so integer and rational weight exponents never touch
floating point.  Powers of pi are carried symbolically by PiScaled and
only rendered to float on demand.  Irrational weight exponents fall back
to math.lgamma (relative accuracy about 1e-13).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PiScaled",
    "LadderParams",
    "pochhammer",
    "c_alpha",
    "monomial_moment",
    "moment_assembly_pair",
    "norm_ladder",
    "norm_ladder_recursive",
    "ladder_sequence",
    "a_seq",
    "a_ratio",
    "gauss_exponent",
    "raabe_diag",
    "RaabeDiagnostics",
    "weighted_norm_assemble",
    "ladder_growth_limit",
    "dbar_tail_bound",
]


@dataclass(frozen=True)
class PiScaled:
    """A number of the form value * pi**pi_pow with exact value."""

    pi_pow: int
    value: Fraction

    def to_float(self) -> float:
        return float(self.value) * math.pi**self.pi_pow

    def __add__(self, other: "PiScaled") -> "PiScaled":
        if self.pi_pow != other.pi_pow:
            raise ValueError("cannot add different powers of pi exactly")
        return PiScaled(self.pi_pow, self.value + other.value)

    def scale(self, c: Fraction) -> "PiScaled":
        return PiScaled(self.pi_pow, self.value * c)


@dataclass(frozen=True)
class LadderParams:
    """Parameters of a ladder run; records whether the degree satisfies
    the threshold used for the symmetric-differential conclusion."""

    N: int
    n: int
    alpha: Fraction | float = Fraction(0)

    def __post_init__(self):
        if self.N < 1 or self.n < 1:
            raise ValueError("need N >= 1 and n >= 1")

    @property
    def meets_degree_threshold(self) -> bool:
        return self.N >= self.n + 2


def _as_exact(alpha):
    """Fraction for int/Fraction input, None for true floats."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, float) and alpha == int(alpha):
        return Fraction(int(alpha))
    return None


def pochhammer(x, k: int):
    """Rising factorial x (x+1) ... (x+k-1); exact for Fraction input."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = x**0
    for i in range(k):
        out = out * (x + i)
    return out


def c_alpha(n: int, alpha):
    """Normalization (alpha+1)_n / n! of the weighted measure.

    Exact Fraction for rational alpha; float via lgamma otherwise.
    Negative integers alpha <= -1 hit a Gamma pole and are rejected;
    non-integer alpha <= -1 is computed but flagged by the caller.
    """
    ae = _as_exact(alpha)
    if ae is not None:
        if ae <= -1 and ae.denominator == 1:
            raise ValueError(f"alpha = {ae} is a Gamma pole")
        return pochhammer(ae + 1, n) / math.factorial(n)
    sign, val = 1.0, 0.0
    for i in range(n):
        term = alpha + 1 + i
        if term < 0:
            sign = -sign
        val += math.log(abs(term))
    return sign * math.exp(val - math.lgamma(n + 1))


def monomial_moment(I, alpha, n: int) -> PiScaled:
    """Squared weighted L2 mass of the monomial t^I over the unit ball:

        pi^n I! Gamma(alpha+1) / Gamma(n + |I| + alpha + 1)
          = pi^n I! / (alpha+1)_(n+|I|).

    Requires alpha > -1 (the integral diverges otherwise).
    """
    if len(I) != n:
        raise ValueError("multi-index length must equal n")
    af = float(alpha)
    if af <= -1:
        raise ValueError("moment requires alpha > -1")
    ae = _as_exact(alpha)
    fact = 1
    for i in I:
        fact *= math.factorial(i)
    total = n + sum(I)
    if ae is not None:
        return PiScaled(n, Fraction(fact) / pochhammer(ae + 1, total))
    val = fact / math.exp(math.lgamma(alpha + 1 + total) - math.lgamma(alpha + 1))
    return PiScaled(n, Fraction(val))


def moment_assembly_pair(I, alpha, n: int):
    """Both sides of the norm-assembly identity for one multi-index:

    left  = c_alpha * moment(I)
    right = pi^n/n! * (m! Gamma(n+alpha+1)/Gamma(n+m+alpha+1)) * (I!/m!)

    Returned as PiScaled values; exactly equal for rational alpha.
    """
    m = sum(I)
    left = monomial_moment(I, alpha, n).scale(_to_fraction(c_alpha(n, alpha)))
    ae = _as_exact(alpha)
    fact_I = 1
    for i in I:
        fact_I *= math.factorial(i)
    if ae is not None:
        weight = Fraction(math.factorial(m)) / pochhammer(ae + n + 1, m)
        right_val = weight * Fraction(fact_I, math.factorial(m)) / math.factorial(n)
    else:
        weight = math.factorial(m) / math.exp(
            math.lgamma(n + m + alpha + 1) - math.lgamma(n + alpha + 1)
        )
        right_val = Fraction(weight * fact_I / math.factorial(m) / math.factorial(n))
    return left, PiScaled(n, right_val)


def _to_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def norm_ladder(N: int, n: int, m: int) -> Fraction:
    """Closed-form squared norm after m ladder steps, starting from a unit
    seed of degree N:

        prod_{j=1..m} (1 + (n-1)/(N+j))
        * (2N-1)! ((N+m-1)!)^2 / ( ((N-1)!)^2 (2N+m-1)! m! )
    """
    if N < 1 or m < 0:
        raise ValueError("need N >= 1 and m >= 0")
    prod = Fraction(1)
    for j in range(1, m + 1):
        prod *= 1 + Fraction(n - 1, N + j)
    closed = (
        Fraction(math.factorial(2 * N - 1), math.factorial(N - 1) ** 2)
        * Fraction(math.factorial(N + m - 1) ** 2, math.factorial(2 * N + m - 1))
        / math.factorial(m)
    )
    return prod * closed


def norm_ladder_recursive(N: int, n: int, m: int) -> Fraction:
    """Step recursion: value(m) = (1 + (n-1)/(N+m)) (N+m-1)^2 / E_{N,m}
    times value(m-1); independent route, must equal norm_ladder exactly."""
    if N < 1 or m < 0:
        raise ValueError("need N >= 1 and m >= 0")
    val = Fraction(1)
    for k in range(1, m + 1):
        E = k * (2 * N + k - 1)
        val *= (1 + Fraction(n - 1, N + k)) * Fraction((N + k - 1) ** 2, E)
    return val


def ladder_sequence(N: int, n: int, m_max: int) -> list:
    """Ladder values for m = 0 .. m_max, computed incrementally."""
    out = [Fraction(1)]
    val = Fraction(1)
    for k in range(1, m_max + 1):
        E = k * (2 * N + k - 1)
        val *= (1 + Fraction(n - 1, N + k)) * Fraction((N + k - 1) ** 2, E)
        out.append(val)
    return out


def _ratio_factors(N: int, n: int, alpha, l: int):
    """Numerator and denominator linear factors of a_(l+1) / a_l."""
    ae = _as_exact(alpha)
    al = ae if ae is not None else alpha
    num = [N + 1 + l, N + l, N + l, N + l + n]
    den = [n + N + al + 1 + l, 2 * N + l, l + 1, N + l + 1]
    return num, den


def a_ratio(N: int, n: int, alpha, l: int):
    """a_(l+1) / a_l, exact for rational alpha."""
    num, den = _ratio_factors(N, n, alpha, l)
    ae = _as_exact(alpha)
    if ae is not None:
        out = Fraction(1)
        for f in num:
            out *= Fraction(f)
        for f in den:
            out /= Fraction(f)
        return out
    p, q = 1.0, 1.0
    for f in num:
        p *= float(f)
    for f in den:
        q *= float(f)
    return p / q


def a_seq(N: int, n: int, alpha, l: int):
    """The l-th ratio-sequence value built by stepping from a_0 = 1:

        a_l = (N+1)_l (N)_l (N)_l / ( (n+N+alpha+1)_l (2N)_l l! )
              * prod_{j=1..l} (1 + (n-1)/(N+j)),

    exact for rational alpha.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    ae = _as_exact(alpha)
    val = Fraction(1) if ae is not None else 1.0
    for k in range(l):
        val = val * a_ratio(N, n, alpha, k)
    return val


@dataclass(frozen=True)
class RaabeDiagnostics:
    """Ratio-test diagnostics for the a_l sequence."""

    ls: list
    values: list          # l (a_l / a_(l+1) - 1), exact when alpha is rational
    fitted_limit: object  # tail fit eliminating the 1/l correction
    gauss_exponent: object  # exact limit from the ratio's polynomial expansion
    converges: bool


def _poly_from_factors(consts):
    """Ascending coefficients of prod (l + c) as a polynomial in l."""
    coeffs = [1]
    for c0 in consts:
        new = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] + c * c0
        coeffs = new
    return coeffs


def gauss_exponent(N: int, n: int, alpha):
    """Exact limit of l (a_l/a_(l+1) - 1) read off the polynomial expansion
    of the ratio: the sub-leading coefficient gap of numerator versus
    denominator.  Equal to alpha + 2; the series converges iff it exceeds 1.
    """
    num, den = _ratio_factors(N, n, alpha, 0)
    # each factor is monic linear in l; the l = 0 values are the constants
    P = _poly_from_factors(den)  # numerator polynomial of a_l / a_(l+1)
    Q = _poly_from_factors(num)
    # monic and same degree, so the limit is the sub-leading coefficient gap
    return P[-2] - Q[-2]


def raabe_diag(N: int, n: int, alpha, L: int) -> RaabeDiagnostics:
    """Ratio-test sequence r_l = l (a_l/a_(l+1) - 1) up to horizon L.

    The fitted limit removes the O(1/l) correction with an exact two-point
    elimination at l = L/2 and l = L; the convergence verdict uses the
    exact Gauss exponent, so it flips precisely where the exponent crosses 1.
    """
    if L < 100:
        raise ValueError("horizon L must be at least 100")

    def r(l: int):
        ratio = a_ratio(N, n, alpha, l)  # a_(l+1)/a_l
        inv = 1 / ratio
        return l * (inv - 1)

    ls = sorted(set(list(range(1, min(L, 50) + 1)) + [L // 4, L // 2, 3 * L // 4, L]))
    values = [r(l) for l in ls]
    r1, r2 = r(L // 2), r(L)
    l1, l2 = L // 2, L
    # fit r_l = c + b/l through the two tail points
    c = (Fraction(l2) * r2 - Fraction(l1) * r1) / (l2 - l1) if isinstance(r2, Fraction) else (l2 * r2 - l1 * r1) / (l2 - l1)
    h = gauss_exponent(N, n, alpha)
    converges = h > 1
    return RaabeDiagnostics(ls, values, c, h, bool(converges))


def weighted_norm_assemble(coeff_norms, n: int, alpha, m_max: int | None = None) -> list:
    """Partial sums of the weighted-norm series

        pi^n/n! * sum_m coeff_norms[m] m! Gamma(n+alpha+1)/Gamma(n+m+alpha+1)

    as PiScaled values; exact for rational alpha and rational inputs.
    """
    if m_max is None:
        m_max = len(coeff_norms) - 1
    ae = _as_exact(alpha)
    partial = Fraction(0)
    out = []
    for m in range(m_max + 1):
        cm = coeff_norms[m] if m < len(coeff_norms) else 0
        cmF = cm if isinstance(cm, Fraction) else Fraction(cm) if isinstance(cm, int) else Fraction(float(cm))
        if ae is not None:
            weight = Fraction(math.factorial(m)) / pochhammer(ae + n + 1, m)
        else:
            weight = Fraction(
                math.factorial(m)
                / math.exp(math.lgamma(n + m + alpha + 1) - math.lgamma(n + alpha + 1))
            )
        partial += cmF * weight / math.factorial(n)
        out.append(PiScaled(n, partial))
    return out


def ladder_growth_limit(N: int, n: int) -> Fraction:
    """Exact limit of ladder(m) m^(2-n) as m grows:

        (2N-1)!/((N-1)!)^2 * N!/(N+n-1)!

    The ladder values approach K m^(n-2) with this K, which certifies the
    boundedness of the normalized sweep together with tail monotonicity.
    """
    return Fraction(math.factorial(2 * N - 1), math.factorial(N - 1) ** 2) * Fraction(
        math.factorial(N), math.factorial(N + n - 1)
    )


def dbar_tail_bound(N: int, n: int, m_max: int) -> list:
    """Tail-bound scalars b_m for m = N .. m_max:

        b_m = m^2 (n+1)! (m+1)!/(n+m+2)! * ladder(m - N),

    exact Fractions; m b_m stays bounded (the bound behaves like 1/m).
    """
    if m_max < N:
        raise ValueError("m_max must be at least N")
    lads = ladder_sequence(N, n, m_max - N)
    out = []
    for m in range(N, m_max + 1):
        b = (
            Fraction(m * m)
            * math.factorial(n + 1)
            / pochhammer(Fraction(m + 2), n + 1)
            * lads[m - N]
        )
        out.append((m, b))
    return out
