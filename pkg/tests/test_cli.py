import json
import math

import numpy as np
import pytest

from ncmimo import cli
from ncmimo.capacity import bstm_constant, gain_ratio, ustm_constant
from ncmimo.params import ChannelDims, derive


def run_cli(capsys, argv):
    code = cli.main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def parse_csv(out):
    lines = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def test_constants_csv(capsys):
    code, out, err = run_cli(capsys, ["constants", "--T", "10", "--M", "5", "--N", "100"])
    assert code == 0
    assert out.startswith("# tool: ncmimo")
    assert "# rng: pcg64" in out
    assert "# config:" in out
    header, rows = parse_csv(out)
    assert len(rows) == 1
    row = dict(zip(header, rows[0]))
    dp = derive(ChannelDims(T=10, M=5, N=100))
    b = bstm_constant(dp)
    u = ustm_constant(dp)
    # repr floats round-trip exactly
    assert float(row["c_bstm"]) == b.constant
    assert float(row["c_ustm"]) == u.constant
    assert float(row["c_gap"]) == b.constant - u.constant
    assert float(row["prelog"]) == 2.5
    # per-term columns present
    assert "bstm_gamma_ratio" in header and "ustm_logdet" in header


def test_constants_bits_scaling(capsys):
    _, out_nats, _ = run_cli(capsys, ["constants", "--T", "4", "--M", "2", "--N", "3"])
    _, out_bits, _ = run_cli(capsys, ["constants", "--T", "4", "--M", "2", "--N", "3", "--bits"])
    hn, rn = parse_csv(out_nats)
    hb, rb = parse_csv(out_bits)
    nats = dict(zip(hn, rn[0]))
    bits = dict(zip(hb, rb[0]))
    ln2 = math.log(2.0)
    assert float(bits["c_bstm"]) == pytest.approx(float(nats["c_bstm"]) / ln2, rel=1e-15)
    assert float(bits["c_gain_limit"]) == pytest.approx(
        float(nats["c_gain_limit"]) / ln2, rel=1e-15)
    # the prelog multiplies log(rho) and is unit-free
    assert bits["prelog"] == nats["prelog"]


def test_constants_dimension_error_exit_code(capsys):
    code, out, err = run_cli(capsys, ["constants", "--T", "4", "--M", "3", "--N", "4"])
    assert code == 2
    assert out == ""
    assert "floor(T/2)" in err


def test_output_is_deterministic(capsys):
    argv = ["constants", "--T", "8", "--M", "2", "--N", "4", "--seed", "5"]
    _, out1, _ = run_cli(capsys, argv)
    _, out2, _ = run_cli(capsys, argv)
    assert out1 == out2


def test_wall_clock_only_on_stderr(capsys):
    _, out, err = run_cli(capsys, ["constants", "--T", "4", "--M", "1", "--N", "2"])
    assert "wall clock" in err
    assert "wall clock" not in out


def test_gain_table_values(capsys):
    code, out, _ = run_cli(capsys, [
        "gain-table", "--T-list", "10,100", "--N-list", "100", "--snr-db", "30"])
    assert code == 0
    header, rows = parse_csv(out)
    table = {(int(r[0]), int(r[1])): r for r in rows}
    g_10 = float(table[(10, 100)][3])
    g_100 = float(table[(100, 100)][3])
    assert abs(g_10 - 0.13) < 0.015
    assert g_100 < 0.03
    # default M rule min(floor(T/2), N)
    assert int(table[(10, 100)][2]) == 5
    assert int(table[(100, 100)][2]) == 50
    # exact round-trip against the library
    assert g_10 == gain_ratio(derive(ChannelDims(T=10, M=5, N=100)), 30.0)


def test_gain_table_bad_cell_becomes_warning(capsys):
    code, out, _ = run_cli(capsys, [
        "gain-table", "--T-list", "4,10", "--N-list", "5", "--M", "3"])
    assert code == 0
    header, rows = parse_csv(out)
    # M=3 invalid for T=4, fine for T=10
    assert rows[0][3] == ""
    assert rows[1][3] != ""
    assert "# warning: T=4 N=5 M=3" in out


def test_sample_gain_constant_rows(capsys):
    code, out, _ = run_cli(capsys, [
        "sample", "--kind", "gain", "--T", "8", "--M", "2", "--N", "4",
        "--count", "3"])
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["draw", "d1", "d2"]
    want = repr(math.sqrt(8.0))
    for i, row in enumerate(rows):
        assert row == [str(i), want, want]


def test_sample_unitary_deterministic(capsys):
    argv = ["sample", "--kind", "unitary", "--T", "2", "--M", "1",
            "--count", "1", "--seed", "9"]
    _, out1, _ = run_cli(capsys, argv)
    _, out2, _ = run_cli(capsys, argv)
    assert out1 == out2
    header, rows = parse_csv(out1)
    assert header == ["draw", "re_0_0", "im_0_0", "re_1_0", "im_1_0"]
    vec = np.array([float(rows[0][1]) + 1j * float(rows[0][2]),
                    float(rows[0][3]) + 1j * float(rows[0][4])])
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)


def test_sample_beta_columns(capsys):
    code, out, _ = run_cli(capsys, [
        "sample", "--kind", "beta", "--m", "2", "--p", "3", "--n", "2",
        "--count", "2"])
    assert code == 0
    header, rows = parse_csv(out)
    assert len(header) == 1 + 2 * 4  # draw + re/im for each of the 4 entries
    assert len(rows) == 2


def test_sample_missing_args_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sample", "--kind", "gain", "--T", "8", "--M", "2"])
    assert exc.value.code == 1
    err = capsys.readouterr().err
    assert "--N" in err


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1


def test_negative_count_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sample", "--kind", "unitary", "--T", "2", "--M", "1",
                  "--count", "0"])
    assert exc.value.code == 1


def test_json_output_structure(capsys):
    code, out, _ = run_cli(capsys, [
        "constants", "--T", "4", "--M", "2", "--N", "3", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["tool"].startswith("ncmimo")
    assert doc["meta"]["rng"] == "pcg64"
    assert doc["meta"]["config"]["T"] == 4
    assert len(doc["rows"]) == 1
    assert len(doc["rows"][0]) == len(doc["meta"]["columns"])


def test_out_file_matches_stdout(tmp_path, capsys):
    argv = ["gain-table", "--T-list", "10", "--N-list", "20,100"]
    _, out, _ = run_cli(capsys, argv)
    path = tmp_path / "table.csv"
    code, out2, _ = run_cli(capsys, argv + ["--out", str(path)])
    assert code == 0
    assert out2 == ""  # nothing on stdout when writing a file
    data = path.read_bytes()
    assert b"\r" not in data  # LF endings
    assert data.endswith(b"\n")
    # data rows are identical; only the config echo records the output path
    file_rows = [ln for ln in data.decode().splitlines() if not ln.startswith("#")]
    stdout_rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert file_rows == stdout_rows
    # re-running to the same path is byte-identical
    run_cli(capsys, argv + ["--out", str(path)])
    assert path.read_bytes() == data


def test_validate_suite_passes(capsys):
    code, out, _ = run_cli(capsys, ["validate", "--suite", "pdf-oracle", "--n", "5"])
    assert code == 0
    header, rows = parse_csv(out)
    assert header[0] == "suite"
    assert all(r[5] == "true" for r in rows)


def test_validate_failure_exit_code(monkeypatch, capsys):
    from ncmimo import suites as suites_mod
    from ncmimo.statcheck import TestReport

    def forced_fail(n=None, seed=0):
        return [TestReport(name="forced", statistic=1.0, threshold=0.1,
                           p_value=None, passed=False, n_samples=1, seed=seed)]

    monkeypatch.setitem(suites_mod.SUITES, "forced-fail", forced_fail)
    code, out, _ = run_cli(capsys, ["validate", "--suite", "forced-fail"])
    assert code == 3
    header, rows = parse_csv(out)
    assert rows[0][5] == "false"
    assert rows[0][4] == ""  # p_value None renders empty


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "ncmimo" in capsys.readouterr().out
