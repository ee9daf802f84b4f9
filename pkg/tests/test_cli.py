import json

import pytest

from iwahori_zeta.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bad_discriminant_exits_2(capsys):
    code, _, err = run(capsys, "verify", "all", "--p", "11", "--d", "5")
    assert code == 2 and "discriminant" in err


def test_no_inert_pairing_exits_2(capsys):
    assert run(capsys, "verify", "volumes", "--p", "5", "--d", "4")[0] == 2


def test_non_prime_exits_2(capsys):
    assert run(capsys, "table", "volumes", "--p", "9")[0] == 2


def test_cosets_enumeration_limit_exits_2(capsys):
    assert run(capsys, "verify", "cosets", "--p", "7", "--d", "4")[0] == 2


def test_verify_cosets_p3(capsys):
    code, out, _ = run(capsys, "verify", "cosets", "--p", "3", "--lmax", "2", "--mmax", "2",
                       "--format", "text")
    assert code == 0
    assert "160 representatives, 12720 distinct-pair checks" in out


def test_printed_mode_fails(capsys):
    code, out, _ = run(capsys, "verify", "cosets", "--p", "3", "--d", "7", "--lmax", "1",
                       "--mmax", "1", "--mode", "printed")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_verify_zeta_st_st(capsys):
    code, out, _ = run(capsys, "verify", "zeta", "--p", "3", "--case", "st-st", "--order", "20")
    assert code == 0
    kids = json.loads(out)["children"]
    assert len(kids) == 4 and all(k["status"] == "pass" for k in kids)


def test_reports_are_deterministic(capsys, tmp_path):
    args = ["verify", "bessel", "--p", "3", "--d", "4", "--lmax", "2", "--mmax", "2"]
    outs = []
    for n in range(2):
        path = tmp_path / f"r{n}.json"
        assert main(args + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["millis"] is None


def test_timing_flag_adds_millis(capsys):
    _, out, _ = run(capsys, "verify", "bessel", "--p", "3", "--d", "4", "--lmax", "1", "--mmax",
                    "1", "--wp", "1", "--timing")
    assert json.loads(out)["children"][0]["millis"] is not None


def test_skipped_pairs_are_reported(capsys):
    code, out, _ = run(capsys, "verify", "volumes", "--p", "5", "--d", "4", "7", "--lmax", "1",
                       "--mmax", "1")
    assert code == 0
    statuses = [k["status"] for k in json.loads(out)["children"]]
    assert statuses == ["skipped", "pass"]


def test_table_volumes_rows(capsys):
    code, out, _ = run(capsys, "table", "volumes", "--p", "3", "--lmax", "0", "--mmax", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "l\tm\tt\tvolume"
    assert len(lines) - 1 == 12
    assert "0\t0\t5\t1/40" in lines


def test_table_bessel_matches_closed_forms(capsys):
    from iwahori_zeta.bessel import closed_form_table
    code, out, _ = run(capsys, "table", "bessel", "--p", "3", "--wp", "-1", "--lmax", "2",
                       "--mmax", "2", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 3 * 4 + 2 * 3 * 8
    for row in rows:
        want = closed_form_table(3, -1, row["l"], row["m"])[row["t"]]
        assert row["value"] == str(want)


def test_table_whittaker_support(capsys):
    code, out, _ = run(capsys, "table", "whittaker", "--case", "st-unram", "--p", "3")
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert code == 0 and rows
    for row in rows:
        m, t = int(row[2]), int(row[3])
        assert (m == 0 and t == 5) or (m > 0 and t in (3, 5))


def test_tsv_report(capsys):
    code, out, _ = run(capsys, "verify", "volumes", "--p", "3", "--d", "4", "--lmax", "1",
                       "--mmax", "1", "--format", "tsv")
    assert code == 0 and out.splitlines()[0] == "depth\tcheck\tstatus\tparams\twitness"


def test_parallel_matches_serial(tmp_path):
    args = ["verify", "whittaker", "--p", "3", "--d", "4", "7", "--lmax", "1", "--mmax", "1"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
