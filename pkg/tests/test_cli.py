import json
import subprocess
import sys

from wallachflow import cli
from wallachflow.verify import CheckResult


def run_cli(args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "wallachflow.cli", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


class TestAnalyze:
    def test_exact_census_output(self):
        proc = run_cli(["analyze", "--a", "1/6,1/6,1/6", "--exact"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["parameters"]["a"] == ["1/6", "1/6", "1/6"]
        assert payload["surface"]["region"] == "O1"
        deltas = sorted(e["delta"] for e in payload["equilibria"])
        assert deltas == ["-2/9", "-2/9", "-8/9", "1/9"]
        kinds = sorted(e["classification"] for e in payload["equilibria"])
        assert kinds == ["saddle", "saddle", "saddle", "unstable node"]

    def test_degenerate_case_mentions_blowup(self):
        proc = run_cli(["analyze", "--a", "1/4,1/4,1/4", "--exact"])
        payload = json.loads(proc.stdout)
        assert len(payload["equilibria"]) == 1
        assert payload["equilibria"][0]["classification"] == "degenerate"
        assert any("blowup" in n for n in payload["notes"])

    def test_double_root_census(self):
        proc = run_cli(["analyze", "--a", "5/36,1/6,1/4"])
        payload = json.loads(proc.stdout)
        assert len(payload["equilibria"]) == 3
        assert sorted(e["multiplicity"] for e in payload["equilibria"]) == [1, 1, 2]

    def test_decimal_under_exact_warns(self):
        proc = run_cli(["analyze", "--a", "0.2,0.3,0.4", "--exact"])
        assert proc.returncode == 0
        assert "float mode" in proc.stderr

    def test_usage_error(self):
        proc = run_cli(["analyze", "--a", "1,2"])
        assert proc.returncode == 2

    def test_domain_error_on_undefined_triple(self):
        proc = run_cli(["analyze", "--a", "1,1,-1/2"])
        assert proc.returncode == 3


class TestFlow:
    def test_trajectory_csv(self, tmp_path):
        out = tmp_path / "traj.csv"
        proc = run_cli([
            "flow", "--a", "1/6,1/6,1/6", "--x0", "1,1", "--tmax", "5",
            "--out", str(out),
        ])
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,x1,x2,x3,V"
        assert lines[1].startswith("0,1,1,1,1")
        summary = json.loads(proc.stdout)
        assert summary["runs"][0]["status"] == "converged"

    def test_default_rtol_documented(self):
        proc = run_cli(["flow", "--help"])
        assert "1e-10" in proc.stdout.replace(" ", "") or "rtol" in proc.stdout

    def test_nonpositive_start_rejected(self):
        proc = run_cli(["flow", "--a", "1/6,1/6,1/6", "--x0", "-1,1"])
        assert proc.returncode == 2

    def test_batch_reproducible(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["flow", "--a", "7/15,7/15,7/15", "--random-starts", "3",
                "--seed", "5", "--tmax", "3"]
        run_cli([*args, "--out", str(out1)])
        run_cli([*args, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestScan:
    def test_row_count_and_order(self, tmp_path):
        out = tmp_path / "scan.csv"
        proc = run_cli(["scan", "--n", "5", "--out", str(out)])
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 125
        coords = [tuple(map(float, ln.split(",")[:3])) for ln in lines[1:]]
        assert coords == sorted(coords)

    def test_deterministic_output(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["scan", "--n", "3", "--out", str(out1)])
        run_cli(["scan", "--n", "3", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_threads_agree_with_serial(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["scan", "--n", "3", "--out", str(out1)])
        run_cli(["--threads", "2", "scan", "--n", "3", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_rejects_small_n(self):
        proc = run_cli(["scan", "--n", "1"])
        assert proc.returncode == 2

    def test_threads_env_var(self, tmp_path, monkeypatch):
        out = tmp_path / "scan.csv"
        monkeypatch.setenv("WALLACH_THREADS", "2")
        rc = cli.main(["scan", "--n", "2", "--out", str(out)])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 9

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "scan.json"
        proc = run_cli(["scan", "--n", "2", "--json", "--out", str(out)])
        assert proc.returncode == 0
        payload = json.loads(out.read_text())
        assert len(payload) == 8
        assert set(payload[0]) == {"a1", "a2", "a3", "Q", "Q1", "gQ1", "gQ2", "gQ3", "region"}

    def test_region_census_consistency(self, tmp_path):
        # every row labeled like the two-saddle component indeed has exactly
        # two equilibria
        out = tmp_path / "scan.csv"
        run_cli(["scan", "--n", "4", "--out", str(out)])
        import warnings

        from wallachflow.core import Parameters
        from wallachflow.equilibria import CensusWarning, solve_all

        rows = [ln.split(",") for ln in out.read_text().splitlines()[1:]]
        checked = 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CensusWarning)
            for row in rows:
                if row[8] == "O3" and checked < 5:
                    p = Parameters(*(float(v) for v in row[:3]))
                    assert len(solve_all(p)) == 2
                    checked += 1
        assert checked > 0


class TestSurfaceSlice:
    def test_fixed_plane(self, tmp_path):
        out = tmp_path / "slice.csv"
        proc = run_cli(["surface", "--fix", "a1=1/2", "--n", "5", "--out", str(out)])
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "a1,a2,a3,Q,Q1"
        assert len(lines) == 26
        assert all(ln.startswith("0.5,") for ln in lines[1:])

    def test_bad_fix_argument(self):
        proc = run_cli(["surface", "--fix", "b2=1"])
        assert proc.returncode == 2


class TestBlowupCommand:
    def test_report(self):
        proc = run_cli(["blowup"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["roots"] == ["-2/1", "-1/2", "1/1"]
        assert [pt["verdict"] for pt in payload["points"]] == ["saddle"] * 3
        assert "six hyperbolic sectors" in payload["verdict"]


class TestVerifyCommand:
    def test_table_and_exit_codes(self, monkeypatch, capsys):
        calls = {}

        def fake_run_all():
            calls["ran"] = True
            return [CheckResult("A0", True, "fine", 0.01)]

        monkeypatch.setattr("wallachflow.cli.run_all", fake_run_all)
        rc = cli.main(["verify"])
        assert rc == 0 and calls["ran"]
        out = capsys.readouterr().out
        assert "A0" in out and "PASS" in out

        def failing_run_all():
            return [CheckResult("A0", False, "broken", 0.01)]

        monkeypatch.setattr("wallachflow.cli.run_all", failing_run_all)
        rc = cli.main(["verify", "--json"])
        assert rc == 1

    def test_mutated_determinant_form_fails_census_check(self, monkeypatch):
        # perturbing the quartic coefficient of the determinant form must
        # break the exact census criterion
        import wallachflow.linearize as lin_mod
        from wallachflow.verify import check_census_two_saddles

        original = lin_mod.f2

        def perturbed(p, x):
            return original(p, x) + 1e-6 * float(x.x1) ** 4

        monkeypatch.setattr(lin_mod, "f2", perturbed)
        result = check_census_two_saddles()
        assert not result.passed
