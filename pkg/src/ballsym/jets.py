"""Diagonal jets of two-point holomorphic functions and the induced
symmetric differentials.

A holomorphic function f(z, w) on the product of two balls is rewritten in
fiber coordinates through the reflection: ftilde(z, t) = f(z, t_map(z, t)).
The Taylor coefficients of ftilde in t at t = 0 (the diagonal jet) are
extracted by sampling on a torus and taking a discrete Fourier transform,
which is spectrally accurate and has no step-size tradeoff.

The first total degree d at which the jet does not vanish determines a
degree-d symmetric tensor field z -> sum over |I| = d of c_I(z) e^I in the
orthonormal coframe; pushing forward through the coframe matrix gives the
coordinate-frame coefficients, which for the leading degree coincide with
the ordinary Taylor coefficients of f(z, .) at w = z.

The jet coefficients of an everywhere-holomorphic f satisfy a first-order
compatibility system coupling the antiholomorphic coframe derivative, the
full connection action on the symmetric factors, and the next-lower jet
level.  Two independent assemblies of that system are provided: a direct
per-index form and a table form phrased through the raising operator.
Note the connection acts on every symmetric slot, coupling same-degree
coefficients across neighbouring multi-indices; the coupling matrix is the
full connection tensor, not only its diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ball, frames, symtensor
from .frames import WirtingerConfig

__all__ = [
    "HoloFunction",
    "JetTable",
    "JetConfig",
    "diagonal_jet",
    "vanishing_order",
    "VanishingOrderNotFound",
    "SymDifferentialSample",
    "psi_extract",
    "compatibility_residual",
    "dbar_phi_residual",
    "equivariance_residual",
    "taylor_in_w",
    "BUILTIN_FUNCTIONS",
    "builtin_function",
]


@dataclass(frozen=True)
class HoloFunction:
    """A two-point function holomorphic in both slots.

    evaluator maps coordinate arrays (..., n) x (..., n) to values (...),
    broadcasting over leading axes, and must be pure (safe for concurrent
    calls).  Holomorphy is the caller's contract; cr_probe spot-checks it.
    """

    evaluator: object
    label: str = ""

    def __call__(self, z, w):
        return self.evaluator(z, w)

    def cr_probe(self, z, w, h: float = 1e-5) -> float:
        """Largest antiholomorphic derivative magnitude at one sample; a
        cheap holomorphy smoke test, not a proof."""
        zc = np.asarray(z, dtype=complex)
        wc = np.asarray(w, dtype=complex)
        worst = 0.0
        for slot in range(2):
            for j in range(zc.shape[-1]):
                def g(p):
                    if slot == 0:
                        return self.evaluator(p, wc)
                    return self.evaluator(zc, p)
                base = zc if slot == 0 else wc
                d = frames.wirtinger_diff(g, base, j, "anti", WirtingerConfig(h=h))
                worst = max(worst, float(np.max(np.abs(d))))
        return worst


@dataclass(frozen=True)
class JetConfig:
    """Torus radius and grid for jet extraction plus the base-point
    differencing step for coframe derivatives of jet coefficients."""

    radius: float = 0.25
    grid: int = 64
    h_base: float = 1e-4
    gamma_cfg: WirtingerConfig = field(default_factory=lambda: WirtingerConfig(h=1e-4, scheme=4))

    def __post_init__(self):
        if not (0.0 < self.radius <= 0.5):
            raise ValueError("radius must lie in (0, 0.5]")


@dataclass(frozen=True, eq=False)
class JetTable:
    """Taylor coefficients of the fiber expansion at one base point."""

    z: np.ndarray
    order: int
    coeff: dict
    radius: float
    grid: int
    alias_estimate: float

    def get(self, I):
        return self.coeff.get(tuple(I), 0.0)

    def level(self, degree: int, frame: str = "e") -> symtensor.SymCoeffs:
        """All coefficients of one total degree as a tensor table."""
        n = self.z.shape[-1]
        sel = {I: v for I, v in self.coeff.items() if sum(I) == degree}
        return symtensor.SymCoeffs(degree, frame, sel)


def _torus_grid(n: int, radius: float, grid: int) -> np.ndarray:
    ang = radius * np.exp(2j * np.pi * np.arange(grid) / grid)
    axes = np.meshgrid(*([ang] * n), indexing="ij")
    return np.stack(axes, axis=-1)


def diagonal_jet(
    f,
    z,
    order: int,
    radius: float = 0.25,
    grid: int = 64,
) -> JetTable:
    """Jet of t -> f(z, t_map(z, t)) up to the given total order.

    Samples the fiber map on the n-torus of the given radius and reads the
    coefficients from the multidimensional FFT; the leftover aliasing is
    geometric in radius**(grid - order) and reported in the table.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[-1]
    if grid < 2 * order + 2:
        raise ValueError(f"grid {grid} too small for order {order}; need at least {2 * order + 2}")
    if n * radius**2 >= 1.0:
        raise ValueError("torus radius too large: sample points leave the ball")
    t = _torus_grid(n, radius, grid)
    zb = np.broadcast_to(zc, t.shape)
    w = ball.t_map(zb, t)
    vals = np.asarray(f(zb, w), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ValueError("function evaluation produced non-finite values on the sampling torus")
    c = np.fft.fftn(vals) / grid**n
    coeff = {}
    for I in _indices_up_to(n, order):
        coeff[I] = complex(c[I] / radius ** sum(I))
    alias = float(np.max(np.abs(vals))) * radius ** (grid - order) / (1.0 - radius)
    return JetTable(zc, order, coeff, radius, grid, alias)


def _indices_up_to(n: int, order: int):
    for d in range(order + 1):
        yield from symtensor.multi_indices(n, d)


class VanishingOrderNotFound(ValueError):
    """All jet levels up to the requested order were below tolerance."""


def vanishing_order(f, zs, order: int, tol: float = 1e-8, cfg: JetConfig = JetConfig()) -> int:
    """Smallest total degree with a jet coefficient above tol at any of the
    base points.  The induced tensor field has this degree; the function
    vanishes on the diagonal to all lower orders."""
    if len(zs) < 1:
        raise ValueError("need at least one base point")
    jets = [diagonal_jet(f, z, order, cfg.radius, cfg.grid) for z in zs]
    for d in range(order + 1):
        level_max = max(
            max((abs(j.coeff[I]) for I in symtensor.multi_indices(_dim(zs[0]), d)), default=0.0)
            for j in jets
        )
        if level_max > tol:
            return d
    raise VanishingOrderNotFound(f"no jet level exceeds {tol} up to order {order}")


def _dim(z) -> int:
    return z.coords.shape[-1] if isinstance(z, ball.Point) else np.asarray(z).shape[-1]


@dataclass(frozen=True, eq=False)
class SymDifferentialSample:
    """A degree-d tensor field sampled at base points, in both frames."""

    degree: int
    points: list
    e_frame: list
    dz_frame: list

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "points": [[float(np.real(c)), float(np.imag(c))] for p in self.points for c in np.atleast_1d(p)],
            "point_dim": int(np.atleast_1d(self.points[0]).shape[-1]),
            "e_frame": [symtensor.coeffs_to_json(u) for u in self.e_frame],
            "dz_frame": [symtensor.coeffs_to_json(u) for u in self.dz_frame],
        }


def psi_extract(f, zs, order: int, tol: float = 1e-8, cfg: JetConfig = JetConfig()) -> SymDifferentialSample:
    """Leading jet level as a symmetric tensor field at the base points.

    The orthonormal-frame coefficients are the raw jet coefficients of the
    first nonvanishing degree d; the coordinate-frame table is their exact
    pushforward through the coframe matrix.  Linear in f.
    """
    d = vanishing_order(f, zs, order, tol, cfg)
    e_frame, dz_frame, pts = [], [], []
    for z in zs:
        zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
        jet = diagonal_jet(f, zc, d, cfg.radius, cfg.grid)
        u = jet.level(d, "e")
        e_frame.append(u)
        dz_frame.append(symtensor.pushforward_sym(ball.frame_A(zc), u, frame="dz"))
        pts.append(zc)
    return SymDifferentialSample(d, pts, e_frame, dz_frame)


class _JetFamily:
    """Center jet plus the four real-direction shifts per coordinate needed
    for antiholomorphic base differencing; shared by both residual paths."""

    def __init__(self, f, z: np.ndarray, order: int, cfg: JetConfig):
        self.z = z
        self.n = z.shape[-1]
        self.cfg = cfg
        self.center = diagonal_jet(f, z, order, cfg.radius, cfg.grid)
        h = cfg.h_base
        self.shifts = {}
        for k in range(self.n):
            e = np.zeros(self.n, dtype=complex)
            e[k] = 1.0
            self.shifts[k] = tuple(
                diagonal_jet(f, z + step, order, cfg.radius, cfg.grid)
                for step in (h * e, -h * e, 1j * h * e, -1j * h * e)
            )

    def dbar_coeff(self, I, k: int) -> complex:
        """d c_I / d conj(z_k) by central differences of the jet tables."""
        h = self.cfg.h_base
        p, m, pi, mi = (s.get(I) for s in self.shifts[k])
        return 0.5 * ((p - m) / (2 * h) + 1j * (pi - mi) / (2 * h))


def _xbar_coeff(fam: _JetFamily, Ainv: np.ndarray, I, mu: int) -> complex:
    return sum(np.conjugate(Ainv[k, mu]) * fam.dbar_coeff(I, k) for k in range(fam.n))


def _connection_term(fam: _JetFamily, gamma: np.ndarray, I, mu: int) -> complex:
    """Full connection action on the symmetric factors: couples c at
    I + eps_a - eps_nu through gamma[a, mu, nu] with multiplicity the
    bumped entry."""
    n = fam.n
    total = 0.0
    for a in range(n):
        for nu in range(n):
            J = list(I)
            J[a] += 1
            J[nu] -= 1
            if J[nu] < 0:
                continue
            total += J[a] * fam.center.get(tuple(J)) * gamma[a, mu, nu]
    return total


def compatibility_residual(f, z, I, cfg: JetConfig = JetConfig()) -> np.ndarray:
    """Left side of the holomorphy compatibility system at one multi-index,
    one entry per coframe direction; near zero for holomorphic f.

    Assembled directly: coframe antiholomorphic derivative of c_I, plus the
    full connection action at level |I|, plus (|I| - 1) times the lower
    coefficient.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    I = tuple(I)
    fam = _JetFamily(f, zc, sum(I), cfg)
    return _compat_from_family(fam, I, cfg)


def _compat_from_family(fam: _JetFamily, I, cfg: JetConfig) -> np.ndarray:
    n = fam.n
    Ainv = ball.frame_A_inv(fam.z)
    gamma = frames.connection_gamma(fam.z, cfg.gamma_cfg)
    m = sum(I)
    out = np.empty(n, dtype=complex)
    for mu in range(n):
        lower = list(I)
        lower[mu] -= 1
        low = fam.center.get(tuple(lower)) if lower[mu] >= 0 else 0.0
        out[mu] = (
            _xbar_coeff(fam, Ainv, I, mu)
            + _connection_term(fam, gamma, I, mu)
            + (m - 1) * low
        )
    return out


def compatibility_residual_table(f, z, degree: int, cfg: JetConfig = JetConfig()) -> dict:
    """Residual vectors for every multi-index of the given total degree,
    sharing one jet family."""
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    fam = _JetFamily(f, zc, degree, cfg)
    return {I: _compat_from_family(fam, I, cfg) for I in symtensor.multi_indices(fam.n, degree)}


def dbar_phi_residual(f, z, k: int, cfg: JetConfig = JetConfig()) -> float:
    """Table-form residual at jet level k: the antiholomorphic coframe
    derivative of the level-k table plus (k-1) times the raising operator
    applied to level k-1, in sup norm.

    Independent assembly from compatibility_residual (raising-operator
    table path); the two agree to rounding because they share the jets.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[-1]
    fam = _JetFamily(f, zc, k, cfg)
    Ainv = ball.frame_A_inv(zc)
    gamma = frames.connection_gamma(zc, cfg.gamma_cfg)

    dbar = {}
    for I in symtensor.multi_indices(n, k):
        for mu in range(n):
            dbar[(I, mu)] = _xbar_coeff(fam, Ainv, I, mu) + _connection_term(fam, gamma, I, mu)

    lower = fam.center.level(k - 1, "e") if k >= 1 else symtensor.SymCoeffs(0, "e", {})
    rg = symtensor.raising_RG(lower)
    worst = 0.0
    for key, v in dbar.items():
        worst = max(worst, abs(v + (k - 1) * rg.coeff.get(key, 0.0)))
    for key, v in rg.coeff.items():
        if key not in dbar:
            worst = max(worst, abs((k - 1) * v))
    return worst


def equivariance_residual(sample: SymDifferentialSample, gamma, psi_at) -> float:
    """Pullback defect of a coordinate-frame tensor field under a ball
    automorphism.

    gamma provides act(z) and jacobian_matrix(z); psi_at(z) evaluates the
    field (coordinate frame) at transformed points.  For an invariant field
    the pulled-back table at gamma(z), substituted through the action
    differential, matches the table at z; the sup-norm coefficient gap over
    the sample points is returned.  In one dimension this reduces to
    |psi(gamma z) gamma'(z)^N - psi(z)|.
    """
    worst = 0.0
    for zc, u in zip(sample.points, sample.dz_frame):
        gz = gamma.act(zc)
        dg = gamma.jacobian_matrix(zc)
        pulled = symtensor.pushforward_sym(dg, psi_at(gz), frame="dz")
        keys = set(pulled.coeff) | set(u.coeff)
        gap = max(abs(complex(pulled.coeff.get(K, 0)) - complex(u.coeff.get(K, 0))) for K in keys)
        worst = max(worst, gap)
    return worst


def taylor_in_w(f, z, order: int, rel_radius: float = 0.4, grid: int = 32) -> dict:
    """Ordinary Taylor coefficients of w -> f(z, w) centered at w = z via a
    polydisc torus transform; independent oracle for the leading jet level.

    Returns {I: coefficient of (w - z)^I}, |I| <= order.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[-1]
    if grid < 2 * order + 2:
        raise ValueError("grid too small for requested order")
    room = 1.0 - float(np.sqrt(np.sum(np.abs(zc) ** 2)))
    rho = rel_radius * room / np.sqrt(n)
    t = _torus_grid(n, rho, grid)
    w = zc + t
    vals = np.asarray(f(np.broadcast_to(zc, w.shape), w), dtype=complex)
    c = np.fft.fftn(vals) / grid**n
    return {I: complex(c[I] / rho ** sum(I)) for I in _indices_up_to(n, order)}


# ---------------------------------------------------------------------------
# builtin two-point function catalog


def _const(c: complex) -> HoloFunction:
    def f(z, w):
        shape = np.broadcast_shapes(np.asarray(z).shape[:-1], np.asarray(w).shape[:-1])
        return np.full(shape, c, dtype=complex)

    return HoloFunction(f, f"const({c})")


def _diff_power(N: int) -> HoloFunction:
    def f(z, w):
        return np.sum((np.asarray(z) - np.asarray(w)) ** N, axis=-1)

    return HoloFunction(f, f"diff_pow({N})")


def _exp_dot() -> HoloFunction:
    def f(z, w):
        return np.exp(np.sum(np.asarray(z) * np.asarray(w), axis=-1))

    return HoloFunction(f, "exp_dot")


def _pair_prod() -> HoloFunction:
    def f(z, w):
        d = np.asarray(z) - np.asarray(w)
        if d.shape[-1] == 1:
            return d[..., 0] ** 2
        return d[..., 0] * d[..., 1]

    return HoloFunction(f, "pair_prod")


BUILTIN_FUNCTIONS = {
    "const": lambda: _const(1.0),
    "diff_pow_2": lambda: _diff_power(2),
    "diff_pow_3": lambda: _diff_power(3),
    "diff_pow_4": lambda: _diff_power(4),
    "exp_dot": _exp_dot,
    "pair_prod": _pair_prod,
}


def builtin_function(name: str) -> HoloFunction:
    """Look up a catalog function; accepts the friendly spellings
    '(z-w)^N' and 'exp(z*w)' as well as the canonical keys."""
    key = name.strip().lower().replace(" ", "")
    if key.startswith("(z-w)^"):
        return _diff_power(int(key[6:]))
    if key in ("exp(z*w)", "exp(z.w)", "exp(zw)"):
        return _exp_dot()
    if key == "const":
        return _const(1.0)
    if key in BUILTIN_FUNCTIONS:
        return BUILTIN_FUNCTIONS[key]()
    raise KeyError(f"unknown builtin function {name!r}; known: {sorted(BUILTIN_FUNCTIONS)}")
