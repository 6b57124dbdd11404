import json

import pytest

from mmfv.bench import (
    SuiteSpec,
    consistency_suite,
    egm_consistency_experiment,
    sine_convergence,
    tpe_suite,
)
from mmfv.errors import ConfigError


def test_suite_spec_validation():
    with pytest.raises(ConfigError):
        SuiteSpec(suite="nope")
    with pytest.raises(ConfigError):
        SuiteSpec(suite="tpe", trials=2)
    with pytest.raises(ConfigError):
        SuiteSpec(suite="tpe", scale="huge")


def test_consistency_suite_report_and_artifacts(tmp_path):
    spec = SuiteSpec(suite="consistency", out_dir=str(tmp_path / "c"))
    report = consistency_suite(spec)
    assert report["simpson_rel_dev"] <= 1e-15
    assert report["egm_vs_exact_rel_dev"] <= 1e-12
    assert report["quartic_m20_rel_dev"] <= 1e-13
    text = (tmp_path / "c" / "consistency.csv").read_text()
    assert "FAIL" not in text
    manifest = json.loads((tmp_path / "c" / "manifest.json").read_text())
    assert any("consistency.csv" in e["path"] for e in manifest["artifacts"])


def test_consistency_suite_deterministic(tmp_path):
    a = consistency_suite(SuiteSpec(suite="consistency", out_dir=str(tmp_path / "a")))
    b = consistency_suite(SuiteSpec(suite="consistency", out_dir=str(tmp_path / "b")))
    assert a == b
    assert (tmp_path / "a" / "consistency.csv").read_bytes() == (
        tmp_path / "b" / "consistency.csv"
    ).read_bytes()


def test_egm_experiment_scales():
    worst, surviving = egm_consistency_experiment(trials=200, steps=5, seed=3)
    assert worst <= 1e-12
    assert surviving > 0.5


@pytest.mark.slow
def test_tpe_suite_small(tmp_path):
    spec = SuiteSpec(suite="tpe", trials=3, out_dir=str(tmp_path / "t"))
    summary = tpe_suite(spec, modes=("tpe2",), degrees=(2,))
    assert summary[("tpe2", 2)]["max_l1"] < 1e-11
    rows = (tmp_path / "t" / "tpe_suite.csv").read_text().splitlines()
    assert rows[0] == "mode,degree,trial,L1,Linf,levels_mean"
    assert len(rows) == 1 + 3


@pytest.mark.slow
def test_sine_convergence_table_schema(tmp_path):
    spec = SuiteSpec(suite="sine", out_dir=str(tmp_path / "s"))
    tables = sine_convergence(spec, modes=("tpe2",), meshes=(20, 40))
    rows = tables["tpe2"]["rows"]
    assert rows[0][5] is None  # first row has no order
    assert rows[1][5] is not None
    path = tmp_path / "s" / "sine_convergence_tpe2.csv"
    header = path.read_text().splitlines()[0]
    assert header == "mesh,Nx,Ny,L1,Linf,order_L1,order_Linf,N_levels_avg,Lw_max,runtime_s"
