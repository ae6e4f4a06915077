"""Reference processes: alpha-stable noise, fBm, and ARFIMA(p,d,0).

These supply the controlled comparisons for the shuffle decomposition:
iid stable draws carry multifractality purely in the distribution, fBm
carries it purely in the correlation structure, and ARFIMA with stable
innovations combines both (self-similarity index d + 1/alpha).

Stable variates use the Chambers-Mallows-Stuck construction; the target
law is pinned down by `stable_cf`, the closed-form characteristic
function, against which the sampler is validated empirically. With the
scale convention gamma = sqrt(2)/2, alpha = 2 degenerates to a unit
Gaussian.

fBm is generated by circulant embedding of the fractional Gaussian
noise autocovariance

    rho(j) = ((j+1)^2H - 2 j^2H + (j-1)^2H) / 2,

which is exact in distribution: the embedding eigenvalues are
nonnegative for every H in (0, 1), and each increment sample has unit
variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import fftconvolve, lfilter

from .errors import EmbeddingFailure, InvalidParams, NonStationaryAR
from .series import ReturnKind, ReturnSeries, SeriesPath, VariableKind, build_variable

STANDARD_SCALE = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class StableParams:
    """(alpha, beta, gamma, delta): tail index, skew, scale, location."""

    alpha: float
    beta: float = 0.0
    gamma: float = STANDARD_SCALE
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise InvalidParams(f"alpha must lie in (0, 2], got {self.alpha}")
        if not -1.0 <= self.beta <= 1.0:
            raise InvalidParams(f"beta must lie in [-1, 1], got {self.beta}")
        if self.gamma <= 0:
            raise InvalidParams(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class FbmParams:
    """Hurst index in (0, 1) and the number of increments to generate."""

    hurst: float
    length: int

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise InvalidParams(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.length < 2:
            raise InvalidParams(f"length must be >= 2, got {self.length}")


@dataclass(frozen=True)
class ArfimaParams:
    """AR coefficients, fractional order d, innovation law, MA cutoff."""

    ar_coeffs: tuple
    d: float
    stable: StableParams
    ma_truncation: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "ar_coeffs", tuple(float(c) for c in self.ar_coeffs))
        alpha = self.stable.alpha
        if alpha <= 1.0:
            raise InvalidParams(
                f"innovation alpha must lie in (1, 2] for ARFIMA, got {alpha}"
            )
        if not -0.5 < self.d < 1.0 - 1.0 / alpha:
            raise InvalidParams(
                f"d={self.d} outside (-0.5, {1.0 - 1.0 / alpha:.4f}) for alpha={alpha}"
            )
        if self.ar_coeffs:
            # roots of 1 - phi_1 z - ... - phi_p z^p must be outside the unit disk
            poly = np.concatenate(([-c for c in self.ar_coeffs[::-1]], [1.0]))
            roots = np.roots(poly)
            if np.any(np.abs(roots) <= 1.0):
                raise NonStationaryAR(f"AR root(s) inside unit disk: {roots}")
        if int(self.ma_truncation) != self.ma_truncation or self.ma_truncation < 1:
            raise InvalidParams(
                f"ma_truncation must be a positive integer, got {self.ma_truncation}"
            )
        object.__setattr__(self, "ma_truncation", int(self.ma_truncation))


def sample_stable(p: StableParams, rng: np.random.Generator, size=None):
    """Stable draw(s) matching `stable_cf`; scalar when size is None.

    Chambers-Mallows-Stuck: with V uniform on (-pi/2, pi/2) and W unit
    exponential,

        Z = S * sin(alpha (V+B)) / cos(V)^(1/alpha)
              * [cos(V - alpha (V+B)) / W]^((1-alpha)/alpha)

    where B = arctan(beta tan(pi alpha/2)) / alpha and
    S = (1 + beta^2 tan^2(pi alpha/2))^(1/(2 alpha)). The location/scale
    map X = gamma (Z - beta tan(pi alpha/2)) + delta then gives exactly
    the characteristic function evaluated by stable_cf; alpha = 1 uses
    the separate logarithmic branch with X = gamma Z + delta.
    """
    n = 1 if size is None else int(size)
    alpha, beta = p.alpha, p.beta
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=n)
    w = rng.standard_exponential(n)
    if alpha == 1.0:
        half_pi = math.pi / 2.0
        shift = half_pi + beta * v
        z = (shift * np.tan(v) - beta * np.log(half_pi * w * np.cos(v) / shift)) / half_pi
        x = p.gamma * z + p.delta
    else:
        tb = beta * math.tan(math.pi * alpha / 2.0)
        b = math.atan(tb) / alpha
        s = (1.0 + tb * tb) ** (1.0 / (2.0 * alpha))
        va = alpha * (v + b)
        z = (
            s
            * np.sin(va)
            / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - va) / w) ** ((1.0 - alpha) / alpha)
        )
        x = p.gamma * (z - tb) + p.delta
    return float(x[0]) if size is None else x


def stable_cf(p: StableParams, u: float) -> complex:
    """Closed-form characteristic function phi(u) = E exp(iuX)."""
    u = float(u)
    if u == 0.0:
        return complex(1.0, 0.0)
    alpha, beta, gamma, delta = p.alpha, p.beta, p.gamma, p.delta
    au = abs(u)
    sg = math.copysign(1.0, u)
    if alpha == 1.0:
        inner = 1.0 + 1j * beta * (2.0 / math.pi) * sg * math.log(gamma * au)
        expo = -gamma * au * inner + 1j * delta * u
    else:
        tb = math.tan(math.pi * alpha / 2.0)
        inner = 1.0 + 1j * beta * tb * sg * ((gamma * au) ** (1.0 - alpha) - 1.0)
        expo = -((gamma * au) ** alpha) * inner + 1j * delta * u
    return complex(np.exp(expo))


@lru_cache(maxsize=8)
def _embedding_sqrt_eigs(hurst: float, m: int) -> np.ndarray:
    """sqrt of the circulant eigenvalues for fGn of padded length m."""
    j = np.arange(m + 1, dtype=float)
    h2 = 2.0 * hurst
    rho = 0.5 * ((j + 1.0) ** h2 - 2.0 * j**h2 + np.abs(j - 1.0) ** h2)
    c = np.concatenate([rho, rho[-2:0:-1]])
    g = np.fft.fft(c).real
    if g.min() < -1e-8 * g.max():
        raise EmbeddingFailure(
            f"negative circulant eigenvalue {g.min():.3e} for H={hurst}"
        )
    return np.sqrt(np.clip(g, 0.0, None))


def simulate_fbm(p: FbmParams, rng: np.random.Generator):
    """One fBm path and its fGn increments: (SeriesPath, ReturnSeries).

    Spectral synthesis over the circulant embedding of length 2m (m the
    next power of two >= length): hermitian complex Gaussian weights per
    eigenvalue, one FFT, keep the first `length` real outputs.
    """
    n = p.length
    m = 1 << max(1, (n - 1).bit_length())
    sq = _embedding_sqrt_eigs(p.hurst, m)
    xi = rng.standard_normal(m + 1)
    eta = rng.standard_normal(m - 1)
    v = np.empty(2 * m, dtype=complex)
    v[0] = sq[0] * xi[0]
    v[m] = sq[m] * xi[m]
    mid = (xi[1:m] + 1j * eta) / math.sqrt(2.0)
    v[1:m] = sq[1:m] * mid
    v[m + 1 :] = np.conj(v[m - 1 : 0 : -1])
    fgn = (np.fft.fft(v).real / math.sqrt(2.0 * m))[:n]
    increments = ReturnSeries(values=fgn, kind=ReturnKind.DIFFERENCE, demeaned=False)
    return build_variable(increments, VariableKind.PRICE), increments


def fractional_ma_coeffs(d: float, n: int) -> np.ndarray:
    """Binomial-series coefficients of (1-z)^(-d): psi_0..psi_n.

    psi_0 = 1 and psi_j = psi_{j-1} (j-1+d)/j, so psi_j ~ j^(d-1)/Gamma(d)
    for large j; truncating at n leaves O(n^d / Gamma(d+1)) tail mass.
    """
    if not abs(d) < 1.0:
        raise InvalidParams(f"|d| must be < 1, got {d}")
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    j = np.arange(1, n + 1, dtype=float)
    psi = np.empty(n + 1)
    psi[0] = 1.0
    np.cumprod((j - 1.0 + d) / j, out=psi[1:])
    return psi


def simulate_arfima(
    p: ArfimaParams, length: int, rng: np.random.Generator
) -> ReturnSeries:
    """Simulate ARFIMA(p, d, 0) innovations-to-returns.

    Pipeline: iid stable innovations -> truncated MA(inf) fractional
    filter -> AR recursion from a zero state. The first
    ma_truncation + 100 outputs absorb both startup transients and are
    dropped.
    """
    if length < 1:
        raise InvalidParams(f"length must be >= 1, got {length}")
    if p.ma_truncation < 100:
        raise InvalidParams(
            f"ma_truncation must be >= 100, got {p.ma_truncation}"
        )
    warmup = p.ma_truncation + 100
    total = length + warmup
    z = sample_stable(p.stable, rng, size=total)
    if p.d != 0.0:
        psi = fractional_ma_coeffs(p.d, p.ma_truncation)
        w = fftconvolve(z, psi)[:total]
    else:
        w = z
    if p.ar_coeffs:
        ar_poly = np.concatenate(([1.0], [-c for c in p.ar_coeffs]))
        w = lfilter([1.0], ar_poly, w)
    return ReturnSeries(
        values=np.asarray(w[warmup:], dtype=float),
        kind=ReturnKind.DIFFERENCE,
        demeaned=False,
    )
