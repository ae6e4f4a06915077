"""Return series and the stochastic variables built from them.

Three variables are supported for scaling analysis: the cumulated
return path (a log-price level starting at 0), the running sum of
absolute returns, and the running sum of squared returns. The latter
two are volatility proxies and are non-decreasing by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import NonPositivePrice, TooShort


class ReturnKind(str, Enum):
    LOG_RETURN = "log_return"
    DIFFERENCE = "difference"


class VariableKind(str, Enum):
    PRICE = "price"
    CUM_ABS_RETURN = "cum_abs_return"
    CUM_SQ_RETURN = "cum_sq_return"


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Increments r_t plus how they were constructed."""

    values: np.ndarray
    kind: ReturnKind
    demeaned: bool = False

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class SeriesPath:
    """A level series X(t) ready for scaling analysis."""

    values: np.ndarray
    variable_kind: VariableKind

    def __len__(self) -> int:
        return len(self.values)


def make_returns(prices, kind: ReturnKind) -> ReturnSeries:
    """Differences of (log) price levels.

    log_return: r_t = ln(p_{t+1}) - ln(p_t); difference: r_t = p_{t+1} - p_t.
    """
    p = np.asarray(prices, dtype=float)
    if p.size < 2:
        raise TooShort(f"need at least 2 prices, got {p.size}")
    kind = ReturnKind(kind)
    if kind is ReturnKind.LOG_RETURN:
        if np.any(p <= 0):
            bad = int(np.argmax(p <= 0))
            raise NonPositivePrice(f"price at position {bad} is {float(p[bad])!r}")
        r = np.diff(np.log(p))
    else:
        r = np.diff(p)
    return ReturnSeries(values=r, kind=kind, demeaned=False)


def demean(r: ReturnSeries) -> ReturnSeries:
    """Subtract the sample mean and mark the series as demeaned."""
    if len(r) < 1:
        raise TooShort("cannot demean an empty series")
    return replace(r, values=r.values - r.values.mean(), demeaned=True)


def build_variable(r: ReturnSeries, variable_kind: VariableKind) -> SeriesPath:
    """Accumulate returns into one of the three level series."""
    if len(r) < 2:
        raise TooShort(f"need at least 2 returns, got {len(r)}")
    variable_kind = VariableKind(variable_kind)
    v = r.values
    if variable_kind is VariableKind.PRICE:
        x = np.empty(v.size + 1)
        x[0] = 0.0
        np.cumsum(v, out=x[1:])
    elif variable_kind is VariableKind.CUM_ABS_RETURN:
        x = np.cumsum(np.abs(v))
    else:
        x = np.cumsum(np.square(v))
    return SeriesPath(values=x, variable_kind=variable_kind)


def shuffle(r: ReturnSeries, rng: np.random.Generator) -> ReturnSeries:
    """Uniformly random permutation of the returns (Fisher-Yates).

    Destroys temporal structure while preserving the marginal
    distribution exactly; construction tags carry over.
    """
    if len(r) < 1:
        raise TooShort("cannot shuffle an empty series")
    return replace(r, values=rng.permutation(r.values))
