"""Markov-switching multifractal return process.

Returns are r_t = sigma_t u_t with iid standard normal u_t and

    sigma_t^2 = sigma^2 * prod_{i=1..k} M_t^(i),

where each volatility component M^(i) takes values in {m0, 2 - m0}
(mean 1 by construction) and is renewed at each step with probability

    gamma_i = 1 - (1 - gamma_k)^(b^(i - k)),

a geometric progression of renewal frequencies: low-rank components
switch rarely and carry the long memory, the rank-k component switches
with probability gamma_k. Defaults b=2, gamma_k=0.5 follow the standard
binomial cascade calibration; only (m0, sigma) vary across the bundled
fixture of moment-based estimates.

Each component starts from its stationary marginal (a fair draw from
{m0, 2 - m0}), so no burn-in is required; a step advances the state
first and then emits the return.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import InvalidParams
from .series import ReturnKind, ReturnSeries


@dataclass(frozen=True)
class MsmParams:
    """Volatility-cascade parameters (m0, sigma, k, b, gamma_k)."""

    m0: float
    sigma: float
    k: int
    b: float = 2.0
    gamma_k: float = 0.5

    def __post_init__(self):
        if not 1.0 <= self.m0 <= 2.0:
            raise InvalidParams(f"m0 must lie in [1, 2], got {self.m0}")
        if self.sigma <= 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParams(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        if self.b <= 1:
            raise InvalidParams(f"b must exceed 1, got {self.b}")
        if not 0.0 <= self.gamma_k <= 1.0:
            raise InvalidParams(f"gamma_k must lie in [0, 1], got {self.gamma_k}")


@dataclass(frozen=True, eq=False)
class MsmState:
    """Current multiplier vector, one entry per cascade rank."""

    multipliers: np.ndarray


def transition_probs(k: int, b: float, gamma_k: float) -> np.ndarray:
    """Renewal probabilities gamma_1..gamma_k, exact at rank k."""
    if k < 1:
        raise InvalidParams(f"k must be >= 1, got {k}")
    if b <= 1:
        raise InvalidParams(f"b must exceed 1, got {b}")
    if not 0.0 <= gamma_k <= 1.0:
        raise InvalidParams(f"gamma_k must lie in [0, 1], got {gamma_k}")
    i = np.arange(1, k + 1, dtype=float)
    return 1.0 - (1.0 - gamma_k) ** (float(b) ** (i - k))


def step_state(
    state: MsmState, probs: np.ndarray, params: MsmParams, rng: np.random.Generator
) -> MsmState:
    """One renewal sweep: each component redraws with its own probability."""
    m = state.multipliers.copy()
    renew = rng.random(m.size) < probs
    n_new = int(renew.sum())
    if n_new:
        bits = rng.integers(0, 2, size=n_new)
        m[renew] = np.where(bits == 0, params.m0, 2.0 - params.m0)
    return MsmState(multipliers=m)


def simulate_msm(
    params: MsmParams, length: int, rng: np.random.Generator
) -> ReturnSeries:
    """Simulate `length` returns from the cascade.

    The state path is materialized without a per-step loop: every
    potential renewal value is drawn up front and the active value at
    step t is the one drawn at the most recent renewal (column 0 holds
    the initial stationary draw). Same law as stepping the recursion,
    at array speed.
    """
    if length < 1:
        raise InvalidParams(f"length must be >= 1, got {length}")
    k = params.k
    probs = transition_probs(k, params.b, params.gamma_k)
    bits = rng.integers(0, 2, size=(k, length + 1))
    cand = np.where(bits == 0, params.m0, 2.0 - params.m0)
    renew = rng.random((k, length)) < probs[:, np.newaxis]
    steps = np.arange(1, length + 1)
    last = np.maximum.accumulate(np.where(renew, steps, 0), axis=1)
    mult = np.take_along_axis(cand, last, axis=1)
    vol = params.sigma * np.sqrt(np.prod(mult, axis=0))
    r = vol * rng.standard_normal(length)
    return ReturnSeries(values=r, kind=ReturnKind.DIFFERENCE, demeaned=False)


def gmm_estimates() -> dict:
    """Bundled (asset, k) -> MsmParams map of published moment estimates."""
    out = {}
    with resources.files("ghelab.data").joinpath("msm_gmm_estimates.csv").open() as fh:
        for row in csv.DictReader(fh):
            key = (row["asset"], int(row["k"]))
            out[key] = MsmParams(
                m0=float(row["m0"]), sigma=float(row["sigma"]), k=int(row["k"])
            )
    return out
