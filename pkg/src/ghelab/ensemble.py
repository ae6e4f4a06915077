"""Monte Carlo ensembles and the shuffle decomposition.

For each simulated path the variable of interest is analyzed twice:
as generated, and as the average over n_shuffles random permutations of
its returns. Shuffling preserves the return distribution and destroys
temporal order, so comparing delta_h against delta_h_shuff attributes
measured multifractality to fat tails (survives shuffling) versus
correlation structure (does not).

Seeding: path i simulates from SeedSequence(master_seed, spawn_key=(i, 0))
and shuffle j of path i draws from spawn_key=(i, j). Every work item is
therefore independently recomputable and results are identical for any
degree of parallelism; aggregation walks paths in index order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .errors import DegenerateVariance, InvalidParams, MissingShuffledBlock
from .generators import (
    ArfimaParams,
    FbmParams,
    StableParams,
    sample_stable,
    simulate_arfima,
    simulate_fbm,
)
from .ghe import GheConfig, _grid_stats
from .msm import MsmParams, simulate_msm
from .series import (
    ReturnKind,
    ReturnSeries,
    VariableKind,
    build_variable,
    demean,
    shuffle,
)

REJECT_Z = 1.96  # two-sided 5% normal critical value


@dataclass(frozen=True, eq=False)
class EmpiricalSeries:
    """Observed returns wrapped as a one-path 'generator'."""

    series_id: str
    returns: ReturnSeries


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """One ensemble study: generator, sample sizes, estimator settings."""

    generator: object
    n_paths: int = 1000
    path_length: int = 8700
    variable_kind: VariableKind = VariableKind.PRICE
    ghe: GheConfig = GheConfig()
    n_shuffles: int = 33
    master_seed: int = 0
    demean_returns: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variable_kind", VariableKind(self.variable_kind))
        if self.n_paths < 1:
            raise InvalidParams(f"n_paths must be >= 1, got {self.n_paths}")
        if self.n_shuffles < 0:
            raise InvalidParams(f"n_shuffles must be >= 0, got {self.n_shuffles}")
        if isinstance(self.generator, EmpiricalSeries) and self.n_paths != 1:
            raise InvalidParams("an empirical series is a single path")
        hi = self.ghe.tau_max_range[1]
        if self.path_length < 4 * hi:
            raise InvalidParams(
                f"path_length {self.path_length} < 4 * tau_max = {4 * hi}"
            )
        if not 0 <= self.master_seed < 2**64:
            raise InvalidParams("master_seed must fit in 64 bits")


@dataclass(frozen=True)
class IdentityTest:
    """Two-sample z decision for 'same Hurst exponent' at the 95% level."""

    statistic: float
    reject_at_95: bool


@dataclass(frozen=True)
class EnsembleReport:
    """Cross-path moments of the per-path exponent estimates.

    original_std is the dispersion across paths (across the tau_max
    grid when n_paths == 1). shuffled_mean/std describe per-path
    estimates already averaged over the shuffle replicas;
    shuffled_within_std is the mean across paths of the dispersion
    among the replicas themselves. Fields in the shuffled block are
    None when the run was configured with zero shuffles.
    """

    generator: str
    param_set: str
    variable: VariableKind
    q_values: tuple
    n_paths: int
    n_shuffles: int
    original_mean: tuple
    original_std: tuple
    shuffled_mean: tuple | None
    shuffled_std: tuple | None
    shuffled_within_std: tuple | None
    delta_h: float | None
    delta_h_std: float | None
    delta_h_shuff: float | None
    delta_h_shuff_std: float | None
    tests: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DeltaComparison:
    """Original vs shuffled multifractality, with a significance call."""

    delta_h: float
    delta_h_shuff: float
    difference: float
    test: IdentityTest


def path_rng(master_seed: int, path_index: int, slot: int = 0) -> np.random.Generator:
    """Generator for one work item; slot 0 simulates, slot j >= 1 shuffles."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(path_index, slot))
    return np.random.default_rng(ss)


def simulate_returns(
    generator, length: int, rng: np.random.Generator
) -> ReturnSeries:
    """Dispatch on the generator union; empirical sources ignore length."""
    if isinstance(generator, MsmParams):
        return simulate_msm(generator, length, rng)
    if isinstance(generator, StableParams):
        return ReturnSeries(
            values=sample_stable(generator, rng, size=length),
            kind=ReturnKind.DIFFERENCE,
            demeaned=False,
        )
    if isinstance(generator, FbmParams):
        _, increments = simulate_fbm(
            FbmParams(hurst=generator.hurst, length=length), rng
        )
        return increments
    if isinstance(generator, ArfimaParams):
        return simulate_arfima(generator, length, rng)
    if isinstance(generator, EmpiricalSeries):
        return generator.returns
    raise InvalidParams(f"unsupported generator {type(generator).__name__}")


def generator_kind(generator) -> str:
    return {
        MsmParams: "msm",
        StableParams: "stable",
        FbmParams: "fbm",
        ArfimaParams: "arfima",
        EmpiricalSeries: "empirical",
    }[type(generator)]


def default_param_set(generator) -> str:
    if isinstance(generator, MsmParams):
        return f"m0={generator.m0},sigma={generator.sigma},k={generator.k}"
    if isinstance(generator, StableParams):
        return f"alpha={generator.alpha}"
    if isinstance(generator, FbmParams):
        return f"H={generator.hurst}"
    if isinstance(generator, ArfimaParams):
        ar = ",".join(f"ar{i + 1}={c}" for i, c in enumerate(generator.ar_coeffs))
        base = f"alpha={generator.stable.alpha},d={generator.d}"
        return f"{base},{ar}" if ar else base
    if isinstance(generator, EmpiricalSeries):
        return generator.series_id
    return ""


def _path_stats(spec: EnsembleSpec, index: int) -> dict:
    """Exponent grids for one path and its shuffle replicas.

    Returns per-path summaries only; cross-path aggregation happens in
    run_ensemble so the result cannot depend on scheduling.
    """
    try:
        r = simulate_returns(spec.generator, spec.path_length, path_rng(spec.master_seed, index, 0))
        if spec.demean_returns:
            r = demean(r)
        rows = [build_variable(r, spec.variable_kind).values]
        for j in range(1, spec.n_shuffles + 1):
            permuted = shuffle(r, path_rng(spec.master_seed, index, j))
            rows.append(build_variable(permuted, spec.variable_kind).values)
        h, _ = _grid_stats(np.asarray(rows), spec.ghe)
    except Exception as exc:
        exc.args = (f"path {index}: {exc}",)
        raise
    qs = spec.ghe.q_values
    hm = h.mean(axis=-1)  # (rows, n_q): per-series grid-averaged H(q)
    out = {
        "h": hm[0],
        "h_grid_std": h[0].std(axis=-1, ddof=1 if h.shape[-1] > 1 else 0),
    }
    want_delta = 1.0 in qs and 3.0 in qs
    if want_delta:
        d = hm[:, qs.index(1.0)] - hm[:, qs.index(3.0)]
        dg = h[0, qs.index(1.0)] - h[0, qs.index(3.0)]
        out["delta"] = d[0]
        out["delta_grid_std"] = dg.std(ddof=1 if dg.size > 1 else 0)
    if spec.n_shuffles >= 1:
        sddof = 1 if spec.n_shuffles > 1 else 0
        out["h_shuf"] = hm[1:].mean(axis=0)
        out["h_shuf_within"] = hm[1:].std(axis=0, ddof=sddof)
        if want_delta:
            out["delta_shuf"] = d[1:].mean()
            out["delta_shuf_within"] = d[1:].std(ddof=sddof)
    return out


def run_ensemble(spec: EnsembleSpec, threads: int = 1) -> EnsembleReport:
    """Simulate, analyze, and aggregate the whole ensemble.

    `threads` only distributes path work across processes; any value
    yields the identical report.
    """
    indices = range(spec.n_paths)
    worker = partial(_path_stats, spec)
    if threads > 1 and spec.n_paths > 1:
        chunk = max(1, spec.n_paths // (threads * 4))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(worker, indices, chunksize=chunk))
    else:
        stats = [worker(i) for i in indices]

    n = spec.n_paths
    ddof = 1 if n > 1 else 0
    h = np.array([s["h"] for s in stats])
    if n == 1:
        # a single path reports its tau_max-grid dispersion instead
        orig_std = stats[0]["h_grid_std"]
    else:
        orig_std = h.std(axis=0, ddof=ddof)
    want_delta = "delta" in stats[0]
    shuffled = spec.n_shuffles >= 1

    def cross(key, fallback_key=None):
        vals = np.array([s[key] for s in stats])
        if n == 1 and fallback_key is not None:
            return vals.mean(axis=0), np.asarray(stats[0][fallback_key])
        return vals.mean(axis=0), vals.std(axis=0, ddof=ddof)

    sh_mean = sh_std = sh_within = None
    if shuffled:
        sh_mean, sh_std = cross("h_shuf", "h_shuf_within")
        sh_within = np.array([s["h_shuf_within"] for s in stats]).mean(axis=0)
    delta = delta_std = delta_sh = delta_sh_std = None
    if want_delta:
        dm, ds = cross("delta", "delta_grid_std")
        delta, delta_std = float(dm), float(ds)
        if shuffled:
            dsm, dss = cross("delta_shuf", "delta_shuf_within")
            delta_sh, delta_sh_std = float(dsm), float(dss)

    def tup(a):
        return None if a is None else tuple(np.asarray(a).tolist())

    return EnsembleReport(
        generator=generator_kind(spec.generator),
        param_set=default_param_set(spec.generator),
        variable=spec.variable_kind,
        q_values=spec.ghe.q_values,
        n_paths=n,
        n_shuffles=spec.n_shuffles,
        original_mean=tup(h.mean(axis=0)),
        original_std=tup(orig_std),
        shuffled_mean=tup(sh_mean),
        shuffled_std=tup(sh_std),
        shuffled_within_std=tup(sh_within),
        delta_h=delta,
        delta_h_std=delta_std,
        delta_h_shuff=delta_sh,
        delta_h_shuff_std=delta_sh_std,
    )


def identity_test(
    emp_mean: float, emp_std: float, sim_mean: float, sim_std: float
) -> IdentityTest:
    """z = (emp - sim) / sqrt(emp_std^2 + sim_std^2), rejected beyond 1.96."""
    if emp_std < 0 or sim_std < 0:
        raise DegenerateVariance("negative standard deviation")
    var = emp_std * emp_std + sim_std * sim_std
    if var == 0.0:
        raise DegenerateVariance("both dispersions are zero")
    z = (emp_mean - sim_mean) / np.sqrt(var)
    return IdentityTest(statistic=float(z), reject_at_95=bool(abs(z) > REJECT_Z))


def delta_h_comparison(report: EnsembleReport) -> DeltaComparison:
    """Original vs shuffled multifractality for one ensemble."""
    if report.delta_h is None:
        raise MissingShuffledBlock("report lacks delta_h (needs q = 1 and 3)")
    if report.delta_h_shuff is None:
        raise MissingShuffledBlock("report was computed without shuffles")
    test = identity_test(
        report.delta_h, report.delta_h_std, report.delta_h_shuff, report.delta_h_shuff_std
    )
    return DeltaComparison(
        delta_h=report.delta_h,
        delta_h_shuff=report.delta_h_shuff,
        difference=report.delta_h - report.delta_h_shuff,
        test=test,
    )
