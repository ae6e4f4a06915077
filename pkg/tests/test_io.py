import csv

import numpy as np
import pytest

from ghelab import (
    RESULT_COLUMNS,
    ArfimaParams,
    EmpiricalSeries,
    EmptySeries,
    EnsembleSpec,
    FbmParams,
    GheConfig,
    IdentityTest,
    InvalidParams,
    MissingKey,
    MsmParams,
    ParseError,
    ReturnKind,
    StableParams,
    UnknownKey,
    VariableKind,
    ensemble_spec_from_config,
    generator_from_config,
    load_price_csv,
    parse_config,
    prices_to_returns,
    report_rows,
    run_ensemble,
    structure_function_rows,
    write_plot_data,
    write_result_csv,
    write_series_csv,
)
from ghelab.series import ReturnSeries, build_variable


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_price_csv_basic(tmp_path):
    p = write(tmp_path, "a.csv", "price\n100\n101\n99.5\n")
    records = load_price_csv(p)
    assert [r.ordinal for r in records] == [1, 2, 3]
    assert [r.price for r in records] == [100.0, 101.0, 99.5]


def test_load_price_csv_column_selection(tmp_path):
    p = write(tmp_path, "b.csv", "date,close\n2020-01-01,10\n2020-01-02,11\n")
    records = load_price_csv(p, column="close")
    assert [r.price for r in records] == [10.0, 11.0]
    with pytest.raises(MissingKey):
        load_price_csv(p, column="price")


def test_load_price_csv_errors(tmp_path):
    with pytest.raises(ParseError, match="row 2") as info:
        load_price_csv(write(tmp_path, "c.csv", "price\n100\nabc\n"))
    assert info.value.row == 2
    with pytest.raises(ParseError, match="row 1"):
        load_price_csv(write(tmp_path, "d.csv", "date,price\n2020-01-06,\n"))
    with pytest.raises(ParseError):
        load_price_csv(write(tmp_path, "e.csv", "price\ninf\n"))
    with pytest.raises(EmptySeries):
        load_price_csv(write(tmp_path, "f.csv", "price\n"))
    with pytest.raises(FileNotFoundError):
        load_price_csv(tmp_path / "missing.csv")


def test_prices_to_returns(tmp_path):
    p = write(tmp_path, "g.csv", "price\n100\n101\n99.5\n")
    r = prices_to_returns(load_price_csv(p), ReturnKind.DIFFERENCE)
    assert r.values.tolist() == [1.0, -1.5]
    assert r.kind is ReturnKind.DIFFERENCE


def test_parse_config_full(tmp_path):
    p = write(tmp_path, "run.cfg", """
# ensemble settings
generator = arfima; alpha = 1.6; d = 0.1; ar1 = 0.4
n_paths = 10  # trailing comment
variable = cum_abs_return
q_values = 0.5, 1.0, 2
tau_max = 5..19
detrend = false
demean = yes
""")
    cfg = parse_config(p)
    assert cfg.get("generator") == "arfima"
    assert cfg.get("alpha") == 1.6
    assert cfg.get("ar1") == 0.4
    assert cfg.get("n_paths") == 10
    assert cfg.get("variable") is VariableKind.CUM_ABS_RETURN
    assert cfg.get("q_values") == (0.5, 1.0, 2.0)
    assert cfg.get("tau_max") == (5, 19)
    assert cfg.get("detrend") is False
    assert cfg.get("demean") is True
    assert cfg.get("absent", 7) == 7
    with pytest.raises(MissingKey):
        cfg.require("sigma")


def test_parse_config_scalar_tau(tmp_path):
    cfg = parse_config(write(tmp_path, "t.cfg", "generator = stable\ntau_max = 10\n"))
    assert cfg.get("tau_max") == (10, 10)


def test_parse_config_rejects_unknown_key(tmp_path):
    with pytest.raises(UnknownKey, match="line 2"):
        parse_config(write(tmp_path, "u.cfg", "generator = stable\nfoo = 1\n"))


def test_parse_config_rejects_bad_values(tmp_path):
    with pytest.raises(TypeError, match="line 1"):
        parse_config(write(tmp_path, "v.cfg", "n_paths = many\n"))
    with pytest.raises(TypeError, match="line 1"):
        parse_config(write(tmp_path, "w.cfg", "just a sentence\n"))
    with pytest.raises(TypeError):
        parse_config(write(tmp_path, "x.cfg", "detrend = maybe\n"))


def test_generator_from_config_branches(tmp_path):
    st = generator_from_config(parse_config(write(
        tmp_path, "s.cfg", "generator = stable; alpha = 1.6")))
    assert st == StableParams(alpha=1.6)

    msm = generator_from_config(parse_config(write(
        tmp_path, "m.cfg", "generator = msm; m0 = 1.4; sigma = 0.01; k = 8")))
    assert msm == MsmParams(m0=1.4, sigma=0.01, k=8)

    fbm = generator_from_config(parse_config(write(
        tmp_path, "f.cfg", "generator = fbm; hurst = 0.7; path_length = 4096")))
    assert fbm == FbmParams(hurst=0.7, length=4096)

    arf = generator_from_config(parse_config(write(
        tmp_path, "a.cfg", "generator = arfima; alpha = 1.6; d = 0.1; ar1 = 0.4")))
    assert isinstance(arf, ArfimaParams)
    assert arf.ar_coeffs == (0.4,)
    assert (arf.d, arf.stable.alpha) == (0.1, 1.6)

    with pytest.raises(MissingKey):
        generator_from_config(parse_config(write(
            tmp_path, "i.cfg", "generator = msm; m0 = 1.4")))
    with pytest.raises(InvalidParams):
        generator_from_config(parse_config(write(
            tmp_path, "j.cfg", "generator = garch")))


def test_generator_from_config_empirical(tmp_path):
    write(tmp_path, "dow.csv", "price\n100\n101\n102.5\n101\n")
    cfg = parse_config(write(
        tmp_path, "e.cfg", "generator = empirical; input = dow.csv; return_kind = difference"))
    emp = generator_from_config(cfg, data_root=tmp_path)
    assert isinstance(emp, EmpiricalSeries)
    assert emp.series_id == "dow"
    assert emp.returns.values.tolist() == [1.0, 1.5, -1.5]


def test_ensemble_spec_from_config(tmp_path):
    cfg = parse_config(write(tmp_path, "r.cfg", """
generator = stable; alpha = 1.8
n_paths = 7; path_length = 512; n_shuffles = 5
q_values = 1, 3; tau_max = 5..10; detrend = false
"""))
    spec = ensemble_spec_from_config(cfg, master_seed=11)
    assert spec.n_paths == 7
    assert spec.path_length == 512
    assert spec.n_shuffles == 5
    assert spec.master_seed == 11
    assert spec.ghe.q_values == (1.0, 3.0)
    assert spec.ghe.tau_max_range == (5, 10)
    assert spec.ghe.detrend is False


def test_ensemble_spec_from_config_empirical_is_one_path(tmp_path):
    rows = "\n".join(str(100 + i + (i % 3)) for i in range(120))
    write(tmp_path, "asset.csv", "price\n" + rows + "\n")
    cfg = parse_config(write(
        tmp_path, "e.cfg",
        "generator = empirical; input = asset.csv\nn_paths = 50; path_length = 8700"))
    spec = ensemble_spec_from_config(cfg, data_root=tmp_path)
    assert spec.n_paths == 1
    assert spec.path_length == 119


@pytest.fixture(scope="module")
def small_report():
    spec = EnsembleSpec(generator=StableParams(alpha=1.6), n_paths=3,
                        path_length=256, n_shuffles=2, master_seed=21)
    return run_ensemble(spec)


def test_report_rows_layout(small_report):
    rows = report_rows(small_report, table="T5")
    assert [r["stat"] for r in rows] == [
        "H", "H_shuffle_detail"] * 3 + ["delta_H"]
    assert [r["q"] for r in rows[:2]] == [1.0, 1.0]
    assert all(r["table"] == "T5" for r in rows)
    h1 = rows[0]
    assert h1["original_mean"] == small_report.original_mean[0]
    assert h1["shuffled_mean"] == small_report.shuffled_mean[0]
    assert h1["delta_h"] == small_report.delta_h
    detail = rows[1]
    assert detail["shuffled_std"] == small_report.shuffled_within_std[0]
    assert detail["original_mean"] is None
    drow = rows[-1]
    assert drow["q"] is None
    assert drow["original_std"] == small_report.delta_h_std
    assert drow["shuffled_std"] == small_report.delta_h_shuff_std


def test_report_rows_attach_tests(small_report):
    tests = {1.0: IdentityTest(statistic=2.3, reject_at_95=True),
             "delta": IdentityTest(statistic=0.4, reject_at_95=False)}
    shuffled = {1.0: IdentityTest(statistic=-0.2, reject_at_95=False)}
    rows = report_rows(small_report, tests=tests, shuffled_tests=shuffled)
    assert rows[0]["test_z"] == 2.3 and rows[0]["reject95"] is True
    assert rows[1]["test_z"] == -0.2
    assert rows[2]["test_z"] is None
    assert rows[-1]["test_z"] == 0.4 and rows[-1]["reject95"] is False


def test_result_csv_round_trip(tmp_path, small_report):
    tests = {1.0: IdentityTest(statistic=2.2650265121762917, reject_at_95=True)}
    rows = report_rows(small_report, table="T5", tests=tests)
    out = write_result_csv(rows, tmp_path / "result.csv")
    with open(out, newline="") as fh:
        reader = csv.DictReader(fh)
        assert reader.fieldnames == RESULT_COLUMNS
        back = list(reader)
    assert len(back) == 7
    # repr round-trip: floats come back bit-identical
    assert float(back[0]["original_mean"]) == small_report.original_mean[0]
    assert float(back[0]["test_z"]) == 2.2650265121762917
    assert back[0]["reject95"] == "true"
    assert back[1]["original_mean"] == ""
    assert back[-1]["q"] == ""
    assert back[-1]["stat"] == "delta_H"
    assert back[0]["variable"] == "price"


def test_structure_function_rows():
    rng = np.random.default_rng(31)
    r = ReturnSeries(values=rng.standard_normal(256), kind=ReturnKind.DIFFERENCE,
                     demeaned=False)
    path = build_variable(r, VariableKind.PRICE)
    cfg = GheConfig()
    rows = structure_function_rows(path, cfg)
    assert len(rows) == 3 * 19
    qs, taus = zip(*[(row[0], row[1]) for row in rows])
    assert set(qs) == {1.0, 2.0, 3.0}
    assert set(taus) == set(range(1, 20))
    for q, tau, log_tau, log_k in rows:
        assert log_tau == float(np.log(tau))
        assert np.isfinite(log_k)


def test_write_plot_data(tmp_path):
    out = write_plot_data([(1.0, 1, 0.0, -2.5)], "structure_functions",
                          tmp_path / "sf.csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "q,tau,log_tau,log_Kq"
    assert lines[1] == "1.0,1,0.0,-2.5"
    out2 = write_plot_data([(0.5, 0.25, 0.26)], "scaling_function",
                           tmp_path / "scal.csv")
    assert out2.read_text().splitlines()[0] == "q,qHq,qHq_shuffled"
    with pytest.raises(InvalidParams):
        write_plot_data([], "histogram", tmp_path / "h.csv")


def test_write_series_csv_round_trip(tmp_path):
    out = write_series_csv([1.5, 2.5, 4.0], tmp_path / "series.csv", start_index=3)
    lines = out.read_text().splitlines()
    assert lines[0] == "t,price"
    assert lines[1] == "3,1.5"
    records = load_price_csv(out)
    assert [r.price for r in records] == [1.5, 2.5, 4.0]
