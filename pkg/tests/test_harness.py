import json
import subprocess
import sys

import numpy as np
import pytest

from superweyl.grid import DoubledSymbol, PhaseSymbol, make_grid
from superweyl.harness import (
    SuiteConfig,
    emit_report,
    field_from_spec,
    gating_failures,
    gauge_from_spec,
    load_config,
    parse_report,
    potential_from_spec,
    run_suite,
)
from superweyl.seminorms import hoermander_seminorm, super_seminorm
from superweyl.symbols import gaussian_symbol, spectral_symbol


@pytest.fixture
def rng():
    return np.random.default_rng(61)


class TestSeminorms:
    def test_constant_symbol(self):
        g = make_grid(1, 15, 12.0)
        one = PhaseSymbol(g, np.ones(g.symbol_shape()))
        assert hoermander_seminorm(one, 0.0, 1.0, 0.0, 0) == pytest.approx(1.0)
        assert hoermander_seminorm(one, 0.0, 1.0, 0.0, 2) == pytest.approx(1.0, abs=1e-13)
        assert hoermander_seminorm(one, 3.0, 1.0, 0.0, 0) == pytest.approx(1.0)

    def test_zeroth_order_is_weighted_sup(self):
        g = make_grid(1, 15, 12.0)
        f = gaussian_symbol(g, 0.3, -0.2, 1.0, 0.9)
        assert hoermander_seminorm(f, 0.0, 1.0, 0.0, 0) == pytest.approx(float(np.abs(f.values).max()))

    def test_monotonicity(self, rng):
        g = make_grid(1, 15, 12.0)
        f = spectral_symbol(g, rng, 1.2)
        for N in (0, 1, 2, 3):
            assert hoermander_seminorm(f, 1.0, 1.0, 0.0, N) <= hoermander_seminorm(f, 1.0, 1.0, 0.0, N + 1) + 1e-12
        for m_hi, m_lo in ((2.0, 1.0), (1.0, 0.0), (0.0, -1.0)):
            assert hoermander_seminorm(f, m_hi, 1.0, 0.0, 1) <= hoermander_seminorm(f, m_lo, 1.0, 0.0, 1) + 1e-12

    def test_order_cap_and_type_constraint(self, rng):
        g = make_grid(1, 15, 12.0)
        f = spectral_symbol(g, rng, 1.2)
        with pytest.raises(ValueError):
            hoermander_seminorm(f, 0.0, 1.0, 0.0, 5)
        with pytest.raises(ValueError):
            hoermander_seminorm(f, 0.0, 0.0, 1.0, 1)

    def test_super_tensor_factorization(self):
        g = make_grid(1, 15, 12.0)
        fL = gaussian_symbol(g, 0.3, -0.2, 1.0, 0.9)
        fR = gaussian_symbol(g, -0.2, 0.3, 0.9, 1.1)
        F = DoubledSymbol(g, np.multiply.outer(fL.values, fR.values))
        got = super_seminorm(F, 1.0, 2.0, 1.0, 0.0, 0)
        want = hoermander_seminorm(fL, 1.0, 1.0, 0.0, 0) * hoermander_seminorm(fR, 2.0, 1.0, 0.0, 0)
        assert got == pytest.approx(want, rel=1e-12)


class TestSuiteRuns:
    def test_empty_suite_list(self):
        rep = run_suite(SuiteConfig(suites=()))
        assert rep.checks == ()
        assert rep.env["seed"] == 2024

    def test_default_run_passes(self):
        rep = run_suite(SuiteConfig(suites=("grid", "inequalities")))
        assert all(r.passed for r in rep.checks)
        assert len({r.id for r in rep.checks}) == len(rep.checks)
        assert all(r.anchor for r in rep.checks)
        assert len({r.anchor for r in rep.checks}) == len(rep.checks)

    def test_determinism(self):
        cfg = SuiteConfig(suites=("grid",), seed=99)
        a = run_suite(cfg)
        b = run_suite(cfg)
        assert [r.residual for r in a.checks] == [r.residual for r in b.checks]
        c = run_suite(SuiteConfig(suites=("grid",), seed=100))
        assert [r.residual for r in a.checks] != [r.residual for r in c.checks]

    def test_corrupted_tolerance_fails_everything(self):
        rep = run_suite(SuiteConfig(suites=("grid",), tolerances={"*": 0.0}))
        assert rep.checks and all(not r.passed for r in rep.checks)
        assert gating_failures(rep)

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError, match="unknown suites"):
            SuiteConfig(suites=("nonsense",))


class TestReports:
    def test_json_roundtrip(self):
        rep = run_suite(SuiteConfig(suites=("grid",)))
        text = emit_report(rep, None, "json")
        back = parse_report(text, "json")
        assert emit_report(back, None, "json") == text
        payload = json.loads(text)
        assert payload["version"] == "1"
        assert set(payload["env"]) == {"d", "n", "L", "eps", "lambda", "seed"}
        assert set(payload["checks"][0]) == {"id", "anchor", "residual", "tol", "pass", "ms"}

    def test_csv_roundtrip(self):
        rep = run_suite(SuiteConfig(suites=("inequalities",)))
        text = emit_report(rep, None, "csv")
        back = parse_report(text, "csv")
        assert [r.id for r in back.checks] == [r.id for r in rep.checks]
        assert [f"{r.residual:.12g}" for r in back.checks] == [f"{r.residual:.12g}" for r in rep.checks]

    def test_seeded_reruns_byte_identical_residuals(self):
        # wall times differ between runs; every other field is reproducible
        cfg = SuiteConfig(suites=("grid", "inequalities"), seed=5)

        def strip_ms(text):
            payload = json.loads(text)
            for c in payload["checks"]:
                del c["ms"]
            return json.dumps(payload)

        t1 = emit_report(run_suite(cfg), None, "json")
        t2 = emit_report(run_suite(cfg), None, "json")
        assert strip_ms(t1) == strip_ms(t2)

    def test_empty_report_emission(self):
        rep = run_suite(SuiteConfig(suites=()))
        assert json.loads(emit_report(rep, None, "json"))["checks"] == []
        csv_text = emit_report(rep, None, "csv")
        assert csv_text.strip().splitlines()[-1] == "id,anchor,residual,tol,pass,ms"

    def test_unknown_format(self):
        rep = run_suite(SuiteConfig(suites=()))
        with pytest.raises(ValueError):
            emit_report(rep, None, "yaml")


class TestSpecSchema:
    def test_potential_families(self):
        assert potential_from_spec({"family": "zero", "d": 2}).family == "zero"
        assert potential_from_spec({"family": "landau", "b": 0.5}).component(1, np.array([[2.0, 0.0]]))[0] == 1.0
        assert potential_from_spec({"family": "symmetric", "b": 1.0}).d == 2
        lin = potential_from_spec({"family": "linear", "m": [[0.3]]})
        assert lin.component(0, np.array([[2.0]]))[0] == pytest.approx(0.6)

    def test_field_families(self):
        B = field_from_spec({"family": "constant", "b": [[0.0, 1.0], [-1.0, 0.0]]})
        assert B.component(0, 1, np.zeros((1, 2)))[0] == 1.0
        Bw = field_from_spec({"family": "windowed", "d": 2, "tables": {"0,1": [[0.5, [0, 0]]]}, "window": 2.0})
        assert Bw.is_bounded

    def test_gauge_spec(self):
        chi = gauge_from_spec({"d": 1, "table": [[0.5, [2]]]})
        assert chi(np.array([[2.0]]))[0] == pytest.approx(2.0)

    def test_config_loading(self, tmp_path):
        path = tmp_path / "cfg.toml"
        path.write_text(
            """
seed = 7
suites = ["grid"]
[grid]
d = 1
n = 9
L = 10.0
[tolerances]
"grid.plancherel" = 1e-3
"""
        )
        cfg = load_config(str(path))
        assert cfg.seed == 7 and cfg.n == 9 and cfg.suites == ("grid",)
        assert cfg.tolerances["grid.plancherel"] == 1e-3


class TestCLI:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "superweyl.cli", *args], capture_output=True, text=True, timeout=600
        )

    def test_suite_run_and_convert(self, tmp_path):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text('suites = ["grid"]\n[grid]\nd = 1\nn = 9\nL = 12.0\n')
        out = tmp_path / "rep.json"
        res = self.run_cli("suite", "run", str(cfg), "--out", str(out))
        assert res.returncode == 0
        payload = json.loads(out.read_text())
        assert all(c["pass"] for c in payload["checks"])
        res2 = self.run_cli("report", "convert", str(out), "--to", "csv")
        assert res2.returncode == 0
        assert res2.stdout.splitlines()[-1].startswith("grid.")

    def test_expand_csv(self):
        res = self.run_cli("expand", "--grid", "1,31,12", "--eps-values", "0.4,0.2")
        assert res.returncode == 0
        lines = res.stdout.strip().splitlines()
        assert lines[0] == "eps,defect,ratio_to_next"
        ratio = float(lines[1].split(",")[2])
        assert abs(ratio - 4.0) <= 0.4

    def test_quantize_payload(self):
        res = self.run_cli("quantize", "--grid", "1,9,12")
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["roundtrip_residual"] <= 1e-10
