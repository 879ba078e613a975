import json
import subprocess
import sys

import pytest

from pacorr import bounds, cli, evenseq
from pacorr.evenseq import SpecialXi


def run_cli(capsys, argv):
    code = cli.main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


class TestSequenceSources:
    def test_constant(self, capsys):
        code, out, err = run_cli(capsys, ["autocorr", "--constant", "7", "--u", "3"])
        assert code == 0 and out == "7\n"
        assert "config:" in err

    def test_legendre_flat(self, capsys):
        code, out, _ = run_cli(capsys, ["autocorr", "--legendre", "7", "--u", "1"])
        assert code == 0 and out == "-1\n"

    def test_random_needs_seed(self, capsys):
        code, _, err = run_cli(capsys, ["autocorr", "--random", "11", "--u", "1"])
        assert code == 2 and "seed" in err

    def test_exactly_one_source(self, capsys):
        code, _, err = run_cli(capsys, ["autocorr", "--constant", "5",
                                        "--legendre", "7", "--u", "1"])
        assert code == 2

    def test_infile(self, capsys, tmp_path):
        f = tmp_path / "seqs.txt"
        f.write_text("+++\n+-+\n")
        code, out, _ = run_cli(capsys, ["autocorr", "--infile", str(f),
                                        "--line", "0", "--u", "1"])
        assert code == 0 and out == "3\n"
        code, _, err = run_cli(capsys, ["autocorr", "--infile", str(f),
                                        "--line", "9", "--u", "1"])
        assert code == 2 and "out of range" in err


class TestSpectrum:
    def test_legendre_csv(self, capsys):
        code, out, err = run_cli(capsys, ["spectrum", "--legendre", "7"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "u,value"
        assert lines[1] == "0,7"
        assert all(line.endswith(",-1") for line in lines[2:])
        assert "max nontrivial |C_u| = 1" in err

    def test_out_file_keeps_stdout_clean(self, capsys, tmp_path):
        dest = tmp_path / "spec.csv"
        code, out, _ = run_cli(capsys, ["spectrum", "--constant", "5",
                                        "--out", str(dest)])
        assert code == 0 and out == ""
        assert dest.read_text().splitlines()[0] == "u,value"


class TestMonteCarlo:
    def test_csv_output_and_rerun_identical(self, capsys, tmp_path):
        dest = tmp_path / "run.csv"
        argv = ["mc", "--m", "101", "--samples", "60", "--seed", "9",
                "--out", str(dest)]
        assert run_cli(capsys, argv)[0] == 0
        first = dest.read_bytes()
        assert run_cli(capsys, argv)[0] == 0
        assert dest.read_bytes() == first
        lines = first.decode().splitlines()
        assert lines[0].startswith("m,is_prime,samples,seed,")
        assert lines[1].startswith("101,true,60,9,")

    def test_worker_count_invariance(self, capsys, tmp_path):
        out1, out2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
        base = ["mc", "--m", "101", "--samples", "80", "--seed", "12"]
        assert run_cli(capsys, base + ["--workers", "1", "--out", str(out1)])[0] == 0
        assert run_cli(capsys, base + ["--workers", "2", "--out", str(out2)])[0] == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, ["mc", "--m", "11", "--samples", "20",
                                        "--seed", "4", "--format", "json"])
        assert code == 0
        rows = json.loads(out)
        assert rows[0]["m"] == 11 and rows[0]["samples"] == 20

    def test_raw_out(self, capsys, tmp_path):
        raw = tmp_path / "raw.csv"
        code, _, _ = run_cli(capsys, ["mc", "--m", "11", "--samples", "25",
                                      "--seed", "4", "--raw-out", str(raw),
                                      "--out", str(tmp_path / "agg.csv")])
        assert code == 0
        lines = raw.read_text().splitlines()
        assert lines[0] == "m,sample_index,C"
        assert len(lines) == 26

    def test_primes_range(self, capsys):
        code, out, _ = run_cli(capsys, ["mc", "--primes-from", "3", "--primes-to",
                                        "13", "--samples", "5", "--seed", "1"])
        assert code == 0
        ms = [line.split(",")[0] for line in out.splitlines()[1:]]
        assert ms == ["3", "5", "7", "11", "13"]

    def test_concentration_echoes_one_sided(self, capsys):
        code, _, err = run_cli(capsys, ["concentration", "--m", "53", "--samples",
                                        "40", "--seed", "2", "--epsilon", "0.5"])
        assert code == 0
        assert "p_exceed_upper=" in err

    def test_concentration_bad_epsilon(self, capsys):
        code, _, _ = run_cli(capsys, ["concentration", "--m", "53", "--samples",
                                      "10", "--seed", "2", "--epsilon", "0"])
        assert code == 2

    def test_composite_scan(self, capsys):
        code, out, _ = run_cli(capsys, ["composite-scan", "--m", "12",
                                        "--samples", "15", "--seed", "3"])
        assert code == 0
        assert out.splitlines()[1].startswith("12,false,")
        assert run_cli(capsys, ["composite-scan", "--m", "3", "--samples", "5",
                                "--seed", "3"])[0] == 2
        assert run_cli(capsys, ["composite-scan", "--samples", "5",
                                "--seed", "3"])[0] == 2  # no default grid here

    def test_feasibility_exit(self, capsys):
        code, _, err = run_cli(capsys, ["mc", "--m", "2000003", "--samples", "5",
                                        "--seed", "1"])
        assert code == 3 and "SPECTRUM_MAX_M" in err


class TestBoundsCommand:
    def test_table(self, capsys):
        code, out, _ = run_cli(capsys, ["bounds", "--m", "1009", "--theta", "5",
                                        "--k", "100", "--u", "1", "--v", "2"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "name,m,epsilon,theta,k,u,v,value,premise_met"
        table = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert table["lambda_m"][7] == f"{bounds.lambda_m(1009):.12g}"
        assert table["pair_prop5"][8] == "true"
        assert table["cramer_ratio"][4] == "100"


class TestEvenseqCommand:
    def test_count(self, capsys):
        code, out, _ = run_cli(capsys, ["evenseq", "count", "--m", "5",
                                        "--xi", "2,3"])
        assert code == 0 and out == "5\n"

    def test_canon(self, capsys):
        code, out, _ = run_cli(capsys, ["evenseq", "canon", "--m", "5",
                                        "--xi", "2,3"])
        assert code == 0 and out == "1,4\n"

    def test_subset(self, capsys):
        assert run_cli(capsys, ["evenseq", "subset", "--m", "5", "--xi", "2,3",
                                "--indices", "1,2"])[1] == "true\n"
        assert run_cli(capsys, ["evenseq", "subset", "--m", "5", "--xi", "2,3",
                                "--indices", "1"])[1] == "false\n"

    def test_partitions_census(self, capsys):
        code, out, _ = run_cli(capsys, ["evenseq", "partitions", "--m", "11",
                                        "--a", "1", "--b", "2", "--p", "1"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "k,n,count,sum_E"
        sxi = SpecialXi(11, 1, 2, 1)
        for line in lines[1:]:
            k, n, cnt, se = (int(x) for x in line.split(","))
            assert evenseq.count_ckn(sxi, k, n) == cnt
            assert evenseq.sum_E_ckn(sxi, k, n) == se

    def test_count_cap_exit3(self, capsys):
        code, _, err = run_cli(capsys, ["evenseq", "count", "--m", "29",
                                        "--xi", "1,1,1,1,1,1"])
        assert code == 3 and "XI_BRUTE_CAP" in err

    def test_missing_flags(self, capsys):
        assert run_cli(capsys, ["evenseq", "count", "--m", "5"])[0] == 2
        assert run_cli(capsys, ["evenseq", "partitions", "--m", "11",
                                "--a", "1"])[0] == 2


class TestVerify:
    def test_eq1_pass(self, capsys):
        code, out, err = run_cli(capsys, ["verify", "eq1", "--m", "7", "--a", "2",
                                          "--b", "3", "--p", "1"])
        assert code == 0
        payload = json.loads(out)
        assert payload["check"] == "eq1"
        assert [r["verdict"] for r in payload["reports"]] == ["PASS", "PASS"]
        assert "eq1_identity: PASS" in err

    def test_independence_pass_and_fail(self, capsys):
        assert run_cli(capsys, ["verify", "independence", "--m", "7", "--u", "1",
                                "--random-subsets", "50"])[0] == 0
        code, out, err = run_cli(capsys, ["verify", "independence", "--m", "4",
                                          "--u", "2", "--random-subsets", "0"])
        assert code == 1
        assert "independence: FAIL" in err

    def test_pmf(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "pmf", "--m", "5"])
        assert code == 0
        assert json.loads(out)["reports"][0]["detail"]["total_mass_is_one"] is True

    def test_lemma10_variants(self, capsys):
        assert run_cli(capsys, ["verify", "lemma10", "--m", "5",
                                "--xi", "1,2,3"])[0] == 0
        assert run_cli(capsys, ["verify", "lemma10", "--m-list", "3",
                                "--n-list", "2"])[0] == 0

    def test_lemma11(self, capsys):
        assert run_cli(capsys, ["verify", "lemma11", "--Ns", "2,3"])[0] == 0

    def test_lemma8(self, capsys):
        assert run_cli(capsys, ["verify", "lemma8", "--m", "5",
                                "--n-max", "2"])[0] == 0

    def test_appendix_checks(self, capsys):
        base = ["--m", "11", "--a", "1", "--b", "2", "--p", "1"]
        for check in ("lemma12", "lemma13", "split", "ep-bound", "pair-base",
                      "pair-partition", "ck-zero", "ck-base", "ck-bounds",
                      "ck-sum", "exi-sum"):
            argv = ["verify", check] + (["--m", "11"] if check == "pair-base"
                                        else base)
            assert run_cli(capsys, argv)[0] == 0, check

    def test_premise_unmet_is_not_failure(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "prop14", "--m", "11", "--a",
                                        "1", "--b", "2", "--p", "1"])
        assert code == 0
        assert json.loads(out)["reports"][0]["verdict"] == "PREMISE_UNMET"

    def test_onset_window_too_small(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "prop4-onset", "--m-max", "300",
                                        "--require-onset", "3"])
        assert code == 1
        assert json.loads(out)["reports"][0]["lhs"] is None  # no onset in window

    def test_onset_report_only(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "prop4-onset", "--m-max", "300"])
        assert code == 0
        detail = json.loads(out)["reports"][0]["detail"]
        assert detail["violations"][0] == 5

    def test_bridge(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "bridge", "--m", "101",
                                        "--samples", "50", "--seed", "4"])
        assert code == 0
        assert json.loads(out)["reports"][0]["detail"]["max_gap"] <= 2

    def test_missing_flag_usage_error(self, capsys):
        assert run_cli(capsys, ["verify", "eq1", "--a", "1", "--b", "2",
                                "--p", "1"])[0] == 2

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "rep.json"
        code, out, _ = run_cli(capsys, ["verify", "lemma11", "--Ns", "2,3",
                                        "--out", str(dest)])
        assert code == 0 and out == ""
        assert json.loads(dest.read_text())["check"] == "lemma11"


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, ["frobnicate"])[0] == 2

    def test_unknown_flag(self, capsys):
        assert run_cli(capsys, ["mc", "--m", "11", "--samples", "5", "--seed",
                                "1", "--turbo"])[0] == 2

    def test_missing_required(self, capsys):
        assert run_cli(capsys, ["mc", "--m", "11"])[0] == 2


class TestConsoleScript:
    def test_installed_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "pacorr.cli", "autocorr",
                               "--constant", "5", "--u", "1"],
                              capture_output=True, text=True, timeout=60)
        assert proc.returncode == 0
        assert proc.stdout == "5\n"
