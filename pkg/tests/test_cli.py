import argparse
import json

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstieltjes import GammaRequest, gamma
from gstieltjes.cli import (
    emit_json,
    main,
    parse_json,
    parse_n,
    parse_v,
    result_fields,
    value_from_fields,
)


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_n():
    assert parse_n("12345") == 12345
    assert parse_n("10^100") == 10**100
    assert parse_n(" 2^64 ") == 2**64
    with pytest.raises(argparse.ArgumentTypeError, match="position 2"):
        parse_n("10e5")
    with pytest.raises(argparse.ArgumentTypeError, match="position 0"):
        parse_n("^5")


@given(st.integers(0, 10**200))
def test_parse_n_exact(n):
    assert parse_n(str(n)) == n


def test_parse_v():
    assert parse_v(" 2+3i ") == "2+3i"
    with pytest.raises(argparse.ArgumentTypeError):
        parse_v("abc")


@pytest.mark.parametrize("n,v", [(10**100, "2+3i"), (10**5, "1"), (3, "0.5")])
def test_json_roundtrip_is_exact(n, v):
    res = gamma(GammaRequest(n=n, v=v, digits=30))
    fields = result_fields(res)
    back = parse_json(emit_json(fields))
    assert back["value"] == res.value
    assert back["n_int"] == n
    assert value_from_fields(json.loads(emit_json(fields))) == res.value


def test_compute_plain(capsys):
    code, out, _ = run_cli(capsys, "compute", "--n", "10^5", "--digits", "20")
    assert code == 0
    first, diag = out.splitlines()
    assert first == "1.9919273063125410957e83432"
    assert diag.startswith("# method=saddle M=")


def test_compute_json_complex(capsys):
    code, out, _ = run_cli(capsys, "compute", "--n", "10^5", "--v", "2+3i", "--digits", "20", "--format", "json")
    assert code == 0
    fields = parse_json(out)
    assert fields["exponent_re"] == "83440"
    assert fields["mantissa_im"].startswith("7.626605317023539228")


def test_compute_csv_and_out_file(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = run_cli(capsys, "compute", "--n", "7", "--digits", "15", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    header, row = path.read_text().splitlines()
    assert header.startswith("n,v,digits,method")
    assert row.startswith("7,1,15,direct")


def test_asymptotic_subcommand(capsys):
    code, out, _ = run_cli(capsys, "asymptotic", "--n", "10^100", "--digits", "30", "--format", "json")
    assert code == 0
    fields = parse_json(out)
    assert fields["method"] == "asymptotic"
    assert fields["M"] is None


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "compute", "--n", "5", "--v", "0.2")
    assert code == 2 and "Re(v)" in err


def test_bad_guard_env(capsys, monkeypatch):
    monkeypatch.setenv("STIELTJES_PREC_GUARD", "lots")
    code, _, err = run_cli(capsys, "compute", "--n", "5")
    assert code == 2 and "STIELTJES_PREC_GUARD" in err


def test_guard_env_is_used(capsys, monkeypatch):
    monkeypatch.setenv("STIELTJES_PREC_GUARD", "30")
    code, out, _ = run_cli(capsys, "compute", "--n", "10^5", "--digits", "20")
    assert code == 0 and out.startswith("1.9919273063125410957e83432")


def test_profile_csv(capsys):
    code, out, _ = run_cli(capsys, "profile", "--n", "10^5", "--M", "21", "--digits", "20")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "y,re_ratio,im_ratio"
    rows = [list(map(float, line.split(","))) for line in lines[1:]]
    assert len(rows) == 21
    mid = rows[10]
    assert mid[0] == 0 and mid[1] == 1 and mid[2] == 0
    assert abs(rows[0][1]) < 1e-10 and abs(rows[-1][1]) < 1e-10


def test_convergence_csv(capsys):
    code, out, _ = run_cli(
        capsys, "convergence", "--n", "10^20", "--digits", "150",
        "--q-digits", "120", "--levels", "3", "--M", "41",
    )
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    errs = [mpmath.mpf(r[2]) for r in rows]
    assert [r[0] for r in rows] == ["0", "1", "2"]
    assert errs[0] > errs[1] > errs[2]


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--digits", "20")
    assert code == 0
    assert "worst agreement" in out


def test_verify_reports_golden_mismatch(capsys, tmp_path):
    golden = {
        "digits": 20,
        "quadrature": [
            {
                "name": "wrong on purpose",
                "n": "10^5",
                "v": "1",
                "re": {"mantissa": "1.9919273063125410958", "exponent": "83432"},
                "im": None,
            }
        ],
    }
    path = tmp_path / "g.json"
    path.write_text(json.dumps(golden))
    code, out, _ = run_cli(capsys, "verify", "--digits", "15", "--golden-file", str(path))
    assert code == 4
    assert "FAIL golden wrong on purpose" in out
    assert "got 1.9919273063125410957e83432" in out


def test_asymptotic_guard_exit(capsys):
    code, _, err = run_cli(capsys, "asymptotic", "--n", "100", "--v", "50", "--digits", "10")
    assert code == 2 and "n+1 >= 20" in err


def test_asymptotic_vs_compute(capsys):
    a = parse_json(run_cli(capsys, "asymptotic", "--n", "10^10", "--digits", "12", "--format", "json")[1])
    c = parse_json(run_cli(capsys, "compute", "--n", "10^10", "--digits", "12", "--format", "json")[1])
    from gstieltjes.mpkernel import agreement_digits

    assert agreement_digits(a["value"].re, c["value"].re) >= 8


def test_profile_complex_has_imaginary_part(capsys):
    code, out, _ = run_cli(capsys, "profile", "--n", "10^5", "--v", "2+3i", "--M", "21", "--digits", "20")
    assert code == 0
    ims = [float(line.split(",")[2]) for line in out.splitlines()[1:]]
    assert any(abs(x) > 1e-6 for x in ims)


@pytest.mark.parametrize("digits", [1, 7, 33])
def test_plain_mantissa_has_requested_digits(capsys, digits):
    code, out, _ = run_cli(capsys, "compute", "--n", "10^7", "--digits", str(digits))
    assert code == 0
    mant = out.split()[0].split("e")[0].lstrip("-")
    assert len(mant.replace(".", "")) == digits


def test_euler_constant_plain(capsys):
    code, out, _ = run_cli(capsys, "compute", "--n", "0", "--digits", "50")
    assert out.startswith("5.7721566490153286060651209008240243104215933593992e-1")
