import io
import json
import subprocess
import sys

import jsonschema
import pytest

from scaleorder import cli
from scaleorder.orders import OrderVerdict
from scaleorder.schema import SCHEMAS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS[doc["command"]])
    return code, doc


GG = "gg:beta=0.8,alpha=0.5"


class TestCompare:
    def test_theorem2_case(self):
        code, doc = run_json("compare", "--baseline", GG, "--lambda", "1,3", "--theta", "0.5,3.5", "--order", "rh")
        assert code == 0
        assert doc["orders"]["rh"]["outcome"] == "holds"
        assert {"thm1", "thm2"} <= {t["theorem"] for t in doc["theorems"]}
        assert doc["majorization"]["majorized"] is True

    def test_identical_models_lr(self):
        code, doc = run_json("compare", "--baseline", "exp", "--lambda", "1,3", "--theta", "1,3", "--order", "lr")
        assert code == 0 and list(doc["orders"]) == ["lr"]

    def test_failing_order(self):
        code, doc = run_json("compare", "--baseline", "exp", "--lambda", "0.5,3.5", "--theta", "1,3", "--order", "st")
        assert code == 1
        assert doc["orders"]["st"]["witness"]["t1"] > 0

    def test_all_orders(self):
        code, doc = run_json("compare", "--baseline", "exp", "--lambda", "1,2", "--theta", "0.5,2", "--order", "all")
        assert code == 0 and set(doc["orders"]) == {"st", "rh", "lr"}

    def test_outlier_form(self):
        code, doc = run_json(
            "compare", "--baseline", GG,
            "--outlier", "p=2,lambda1=1,q=3,lambda=2", "--outlier-theta", "p=2,lambda1=0.4,q=3,lambda=2",
        )
        assert code == 0
        assert {"thm6", "thm7"} <= {t["theorem"] for t in doc["theorems"]}

    def test_two_baselines(self):
        code, doc = run_json(
            "compare", "--baseline", "exp", "--baseline2", "gamma:shape=0.5",
            "--outlier", "p=1,lambda1=1,q=2,lambda=2", "--outlier-theta", "p=1,lambda1=0.5,q=2,lambda=2",
        )
        assert code == 0
        assert [t["theorem"] for t in doc["theorems"]] == ["thm8"]
        assert len(doc["conditions"]) == 2

    def test_grid_and_tol_overrides(self):
        code, doc = run_json(
            "compare", "--baseline", "exp", "--lambda", "1,3", "--theta", "1,3",
            "--grid", "0.01,10,50,lin", "--tol", "1e-7",
        )
        assert code == 0
        assert doc["grid"] == {"t_min": 0.01, "t_max": 10.0, "points": 50, "spacing": "linear"}
        assert doc["tolerance"] == 1e-7

    def test_contradiction_exit_code(self, monkeypatch):
        from scaleorder import theorems

        monkeypatch.setattr(theorems, "check_rh", lambda x, y, g, t: OrderVerdict("rh", "fails", t, g))
        code, doc = run_json("compare", "--baseline", GG, "--lambda", "1,3", "--theta", "0.5,3.5", "--order", "st")
        assert code == 3
        assert doc["outcome"] == "contradiction" and "error" in doc

    def test_byte_identical_reruns(self):
        argv = ("compare", "--baseline", GG, "--lambda", "1,3", "--theta", "0.5,3.5")
        assert run(*argv)[1] == run(*argv)[1]


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ("compare", "--baseline", "exp", "--lambda", "1,3", "--theta", "1,3,5"),
            ("compare", "--baseline", "exp", "--lambda", "1,3"),
            ("compare", "--lambda", "1,3", "--theta", "1,3"),
            ("compare", "--baseline", "exp", "--lambda", "1,x", "--theta", "1,3"),
            ("compare", "--baseline", "exp", "--lambda", "1,3", "--theta", "1,3", "--order", "hr"),
            ("compare", "--baseline", "exp", "--lambda", "1,3", "--theta", "1,3", "--grid", "1,0.5,10"),
            ("majorize", "--x", "1,2", "--y", "1"),
            ("falsify", "--theorem", "thm2", "--drop", "min"),
            ("falsify", "--theorem", "thm99"),
            ("simulate", "--baseline", "exp", "--lambda", "1", "--n", "0"),
            ("nonsense",),
            (),
        ],
    )
    def test_exit_four(self, argv):
        code, out, err = run(*argv)
        assert code == 4
        assert out == ""
        assert err.startswith("error:")

    def test_parse_error_reports_position(self):
        code, _, err = run("verify-conditions", "--baseline", "gg:beta=0.8,alpha=oops")
        assert code == 4
        assert "position 18" in err  # offset of "oops"


class TestOtherCommands:
    @pytest.mark.parametrize("spec", ["exp", "gamma:shape=0.5", GG])
    def test_verify_conditions_hold(self, spec):
        code, doc = run_json("verify-conditions", "--baseline", spec)
        assert code == 0
        assert doc["report"]["contradictions"] == []

    def test_verify_conditions_weibull_two(self):
        code, doc = run_json("verify-conditions", "--baseline", "weibull:shape=2")
        assert code == 1
        assert any("beta > 1" in n for n in doc["report"]["notes"])

    def test_majorize(self):
        code, doc = run_json("majorize", "--x", "2,2", "--y", "1,3")
        assert code == 0 and doc["majorized"] is True

    def test_simulate_json(self):
        code, doc = run_json("simulate", "--baseline", "exp", "--lambda", "1,2", "--n", "10000", "--seed", "7")
        assert code == 0 and doc["sup_distance"] < 0.02

    def test_simulate_csv(self):
        code, out, _ = run("simulate", "--baseline", "exp", "--lambda", "1,2", "--n", "5", "--seed", "7", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0].startswith("# model=") and lines[1] == "value" and len(lines) == 7

    def test_falsify(self):
        code, doc = run_json("falsify", "--theorem", "thm2", "--trials", "100", "--seed", "1")
        assert code == 0 and doc["counterexample_found"] is False

    def test_falsify_explore(self):
        code, doc = run_json("falsify", "--theorem", "thm2", "--trials", "20", "--seed", "1", "--drop", "region")
        assert code == 0 and doc["mode"] == "explore"

    def test_grid_dump_baseline(self):
        code, out, _ = run("grid-dump", "--baseline", "exp", "--grid", "0.1,1,4,lin")
        lines = out.splitlines()
        assert code == 0
        assert lines[1] == "t,cdf,pdf,reverse_hazard,psi,eta,chi"
        assert len(lines) == 6

    def test_grid_dump_system(self):
        code, out, _ = run("grid-dump", "--baseline", "exp", "--lambda", "1,2", "--grid", "0.1,1,3")
        assert code == 0 and out.splitlines()[1].startswith("t,cdf,pdf,reverse_hazard,log_cdf")


class TestConfigAndOutput:
    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comparison\nbaseline = gg:beta=0.8,alpha=0.5\nlambda=1,3\ntheta = 0.5,3.5\norder=rh\n")
        code, doc = run_json("compare", "--config", str(cfg))
        assert code == 0 and list(doc["orders"]) == ["rh"]

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("baseline=exp\nlambda=1,3\ntheta=0.5,3.5\norder=rh\n")
        code, doc = run_json("compare", "--config", str(cfg), "--order", "st")
        assert list(doc["orders"]) == ["st"]

    @pytest.mark.parametrize("text", ["bogus=1\n", "lambda=1,,2\n", "no equals sign\n"])
    def test_bad_config(self, tmp_path, text):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(text)
        code, _, err = run("compare", "--config", str(cfg))
        assert code == 4 and err

    def test_missing_config(self, tmp_path):
        assert run("compare", "--config", str(tmp_path / "absent"))[0] == 4

    def test_output_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        code, out, _ = run("majorize", "--x", "1,2", "--y", "0.5,2", "--output", "sub/rel.json")
        assert code == 0 and out == ""
        doc = json.loads((tmp_path / "sub" / "rel.json").read_text())
        assert doc["weakly_supermajorized"] is True and doc["majorized"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "scaleorder", "majorize", "--x", "2,2", "--y", "1,3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["majorized"] is True
