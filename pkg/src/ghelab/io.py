"""File formats: price CSVs, run configs, and result/plot-data writers.

All floats are written with repr(), i.e. the shortest string that
round-trips to the same double, so reading a result file back loses
nothing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptySeries,
    InvalidParams,
    MissingKey,
    ParseError,
    UnknownKey,
)
from .ensemble import (
    EmpiricalSeries,
    EnsembleReport,
    EnsembleSpec,
    IdentityTest,
)
from .generators import (
    STANDARD_SCALE,
    ArfimaParams,
    FbmParams,
    StableParams,
)
from .ghe import GheConfig
from .msm import MsmParams
from .series import ReturnKind, ReturnSeries, VariableKind, make_returns

RESULT_COLUMNS = (
    "table,generator,param_set,variable,q,stat,original_mean,original_std,"
    "shuffled_mean,shuffled_std,delta_h,delta_h_shuff,test_z,reject95"
).split(",")


@dataclass(frozen=True)
class PriceRecord:
    """One observation: 1-based data-row ordinal and a positive level."""

    ordinal: int
    price: float


def load_price_csv(path, column: str = "price") -> list[PriceRecord]:
    """Read one numeric column from a headered CSV.

    Row numbers in errors count data rows, the header being row 0.
    """
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise MissingKey(f"column {column!r} not found in {path}")
        for i, row in enumerate(reader, start=1):
            cell = (row.get(column) or "").strip()
            if not cell:
                raise ParseError(i, f"empty {column!r} cell")
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(i, f"non-numeric {column!r} value {cell!r}") from None
            if not np.isfinite(value):
                raise ParseError(i, f"non-finite {column!r} value {cell!r}")
            records.append(PriceRecord(ordinal=i, price=value))
    if not records:
        raise EmptySeries(f"no data rows in {path}")
    return records


def prices_to_returns(records, kind: ReturnKind) -> ReturnSeries:
    prices = np.array([rec.price for rec in records], dtype=np.float64)
    return make_returns(prices, kind)


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(text)


def _parse_float_list(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_tau_range(text: str) -> tuple:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    single = int(text)
    return single, single


_CONFIG_KEYS = {
    "generator": str,
    "input": str,
    "column": str,
    "name": str,
    "m0": float,
    "sigma": float,
    "k": int,
    "b": float,
    "gamma_k": float,
    "alpha": float,
    "beta": float,
    "gamma": float,
    "delta": float,
    "hurst": float,
    "d": float,
    "ar1": float,
    "ar2": float,
    "ar3": float,
    "ma_truncation": int,
    "n_paths": int,
    "path_length": int,
    "n_shuffles": int,
    "variable": VariableKind,
    "return_kind": ReturnKind,
    "q_values": _parse_float_list,
    "q_grid": _parse_float_list,
    "tau_max": _parse_tau_range,
    "detrend": _parse_bool,
    "demean": _parse_bool,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated key-value pairs from a config file."""

    entries: dict

    def get(self, key, default=None):
        return self.entries.get(key, default)

    def require(self, key):
        if key not in self.entries:
            raise MissingKey(f"config key {key!r} is required here")
        return self.entries[key]


def parse_config(path) -> RunConfig:
    """Parse `key = value` statements; `;` separates, `#` comments.

    Unknown keys are rejected outright rather than ignored, so a typo
    cannot silently fall back to a default.
    """
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0]
            for statement in line.split(";"):
                statement = statement.strip()
                if not statement:
                    continue
                if "=" not in statement:
                    raise TypeError(
                        f"line {lineno}: expected 'key = value', got {statement!r}"
                    )
                key, _, value = statement.partition("=")
                key, value = key.strip(), value.strip()
                if key not in _CONFIG_KEYS:
                    raise UnknownKey(f"line {lineno}: unknown config key {key!r}")
                try:
                    entries[key] = _CONFIG_KEYS[key](value)
                except (ValueError, TypeError):
                    raise TypeError(
                        f"line {lineno}: bad value {value!r} for key {key!r}"
                    ) from None
    return RunConfig(entries=entries)


def generator_from_config(cfg: RunConfig, data_root=None):
    """Build the generator union member a config names."""
    kind = cfg.require("generator")
    if kind == "msm":
        return MsmParams(
            m0=cfg.require("m0"),
            sigma=cfg.require("sigma"),
            k=cfg.require("k"),
            b=cfg.get("b", 2.0),
            gamma_k=cfg.get("gamma_k", 0.5),
        )
    if kind == "stable":
        return StableParams(
            alpha=cfg.require("alpha"),
            beta=cfg.get("beta", 0.0),
            gamma=cfg.get("gamma", STANDARD_SCALE),
            delta=cfg.get("delta", 0.0),
        )
    if kind == "fbm":
        return FbmParams(hurst=cfg.require("hurst"), length=cfg.get("path_length", 8192))
    if kind == "arfima":
        ars = []
        for key in ("ar1", "ar2", "ar3"):
            if cfg.get(key) is not None:
                ars.append(cfg.get(key))
        return ArfimaParams(
            ar_coeffs=tuple(ars),
            d=cfg.get("d", 0.0),
            stable=StableParams(
                alpha=cfg.require("alpha"),
                beta=cfg.get("beta", 0.0),
                gamma=cfg.get("gamma", STANDARD_SCALE),
                delta=cfg.get("delta", 0.0),
            ),
            ma_truncation=cfg.get("ma_truncation", 1000),
        )
    if kind == "empirical":
        source = cfg.require("input")
        path = Path(source)
        if data_root is not None and not path.is_absolute():
            path = Path(data_root) / path
        records = load_price_csv(path, cfg.get("column", "price"))
        returns = prices_to_returns(
            records, cfg.get("return_kind", ReturnKind.LOG_RETURN)
        )
        return EmpiricalSeries(series_id=cfg.get("name", path.stem), returns=returns)
    raise InvalidParams(f"unknown generator kind {kind!r}")


def ensemble_spec_from_config(
    cfg: RunConfig, master_seed: int = 0, data_root=None
) -> EnsembleSpec:
    generator = generator_from_config(cfg, data_root)
    ghe = GheConfig(
        q_values=cfg.get("q_values", (1.0, 2.0, 3.0)),
        tau_max_range=cfg.get("tau_max", (5, 19)),
        detrend=cfg.get("detrend", True),
    )
    n_paths = cfg.get("n_paths", 1000)
    path_length = cfg.get("path_length", 8700)
    if isinstance(generator, EmpiricalSeries):
        n_paths = 1
        path_length = len(generator.returns)
    return EnsembleSpec(
        generator=generator,
        n_paths=n_paths,
        path_length=path_length,
        variable_kind=cfg.get("variable", VariableKind.PRICE),
        ghe=ghe,
        n_shuffles=cfg.get("n_shuffles", 33),
        master_seed=master_seed,
        demean_returns=cfg.get("demean", False),
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return repr(float(value))
    return str(value)


def report_rows(
    report: EnsembleReport,
    table: str = "",
    param_set: str | None = None,
    tests: dict | None = None,
    shuffled_tests: dict | None = None,
) -> list[dict]:
    """Flatten a report into result-schema rows.

    Per q value: a `H` row holding cross-path moments (original and
    shuffle-averaged) plus the delta columns, and a `H_shuffle_detail`
    row whose shuffled_std is the within-path dispersion among shuffle
    replicas. One `delta_H` row carries the delta dispersions in the
    *_std columns. test_z on a `H` row compares original panels,
    on a `H_shuffle_detail` row shuffled panels.
    """
    label = report.param_set if param_set is None else param_set
    tests = tests or {}
    shuffled_tests = shuffled_tests or {}
    base = {
        "table": table,
        "generator": report.generator,
        "param_set": label,
        "variable": report.variable.value,
    }
    rows = []
    for idx, q in enumerate(report.q_values):
        test = tests.get(q)
        rows.append(
            base
            | {
                "q": q,
                "stat": "H",
                "original_mean": report.original_mean[idx],
                "original_std": report.original_std[idx],
                "shuffled_mean": None if report.shuffled_mean is None else report.shuffled_mean[idx],
                "shuffled_std": None if report.shuffled_std is None else report.shuffled_std[idx],
                "delta_h": report.delta_h,
                "delta_h_shuff": report.delta_h_shuff,
                "test_z": None if test is None else test.statistic,
                "reject95": None if test is None else test.reject_at_95,
            }
        )
        stest = shuffled_tests.get(q)
        if report.shuffled_within_std is not None:
            rows.append(
                base
                | {
                    "q": q,
                    "stat": "H_shuffle_detail",
                    "original_mean": None,
                    "original_std": None,
                    "shuffled_mean": report.shuffled_mean[idx],
                    "shuffled_std": report.shuffled_within_std[idx],
                    "delta_h": None,
                    "delta_h_shuff": None,
                    "test_z": None if stest is None else stest.statistic,
                    "reject95": None if stest is None else stest.reject_at_95,
                }
            )
    if report.delta_h is not None:
        dtest = tests.get("delta")
        rows.append(
            base
            | {
                "q": None,
                "stat": "delta_H",
                "original_mean": None,
                "original_std": report.delta_h_std,
                "shuffled_mean": None,
                "shuffled_std": report.delta_h_shuff_std,
                "delta_h": report.delta_h,
                "delta_h_shuff": report.delta_h_shuff,
                "test_z": None if dtest is None else dtest.statistic,
                "reject95": None if dtest is None else dtest.reject_at_95,
            }
        )
    return rows


def write_result_csv(rows: list[dict], out_path) -> Path:
    out_path = Path(out_path)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in RESULT_COLUMNS])
    return out_path


def structure_function_rows(path, cfg: GheConfig) -> list[tuple]:
    """(q, tau, log_tau, log_Kq) for tau = 1..tau_max, per q.

    The path is detrended first when the config says so, matching what
    the estimator actually fits.
    """
    from .ghe import _log_structure_matrix, detrend_linear, estimate_drift

    levels = path.values
    if cfg.detrend:
        levels = detrend_linear(path, estimate_drift(path)).values
    hi = cfg.tau_max_range[1]
    log_k = _log_structure_matrix(levels[np.newaxis, :], cfg.q_values, hi)[0]
    rows = []
    for qi, q in enumerate(cfg.q_values):
        for tau in range(1, hi + 1):
            rows.append((q, tau, float(np.log(tau)), float(log_k[qi, tau - 1])))
    return rows


def write_plot_data(rows: list[tuple], kind: str, out_path) -> Path:
    """Plot-ready long-format CSVs for external plotting tools."""
    headers = {
        "structure_functions": ("q", "tau", "log_tau", "log_Kq"),
        "scaling_function": ("q", "qHq", "qHq_shuffled"),
    }
    if kind not in headers:
        raise InvalidParams(f"unknown plot data kind {kind!r}")
    out_path = Path(out_path)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers[kind])
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return out_path


def write_series_csv(values, out_path, start_index: int = 0) -> Path:
    """Two columns t,price: levels indexed from start_index."""
    out_path = Path(out_path)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("t", "price"))
        for offset, value in enumerate(values):
            writer.writerow((start_index + offset, _fmt(float(value))))
    return out_path
