import asyncio
import json
import logging
from pathlib import Path

import numpy as np
import pytest
import yaml
from pydantic import ValidationError

from interfaces.options import PipelineConfig
from interfaces.projector_set import ProjectorSet
from pipelines.contextuality2bell_pipeline import Contextuality2BellPipeline, run_pipeline
from tools.dataset_catalog import dataset_file

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def options(tmp_path, **overrides) -> PipelineConfig:
    return PipelineConfig(sampling=False, working_dir=str(tmp_path / "work"), **overrides)


@pytest.fixture(scope="module")
def pentagon_report(tmp_path_factory):
    work = tmp_path_factory.mktemp("pentagon")
    config = PipelineConfig(sampling=False, working_dir=str(work))
    return run_pipeline(dataset_file("kcbs5"), config, name="kcbs5", seed=2021), work


def test_pentagon_end_to_end(pentagon_report):
    report, _ = pentagon_report
    assert report.failed_stage is None
    assert report.passed
    assert report.input.n == 5 and report.input.has_odd_hole_or_antihole
    assert report.extension.method == "catalog"
    assert report.extension.vectors.n == 13
    assert report.certificate.verdict == "yes"
    assert report.nc_inequality.bound == 11
    assert report.nchv.value == 11 and report.lhv.value == 11
    assert report.values.nc_maxmixed == pytest.approx(35 / 3, abs=1e-9)
    assert report.values.bell_entangled == pytest.approx(35 / 3, abs=1e-9)
    assert [c.label for c in report.removal_audit] == ["v1", "v2", "v3", "v4", "v5"]
    names = {c.name for c in report.checks}
    assert {"nchv_equals_alpha", "lhv_equals_alpha", "value_transfer", "quantum_violation", "removal_audit"} <= names
    assert report.sampling is None


def test_stages_are_written(pentagon_report):
    report, work = pentagon_report
    for filename in ("fingerprint.json", "step1_extension.json", "step2_certificate.json", "step3_inequalities.json", "step3_values.json", "report.json"):
        assert (work / filename).exists(), filename
    assert not (work / "step3_sampling.json").exists()
    saved = json.loads((work / "report.json").read_text())
    assert saved["nc_inequality"]["bound"] == "11"
    assert "alpha(G,w)" in report.render_table()


def test_rerun_loads_cached_stages(pentagon_report, caplog):
    report, work = pentagon_report
    config = PipelineConfig(sampling=False, working_dir=str(work))
    with caplog.at_level(logging.INFO):
        again = run_pipeline(dataset_file("kcbs5"), config, name="kcbs5", seed=2021)
    loaded = [r.getMessage() for r in caplog.records if r.getMessage().startswith("🚀 Loaded")]
    assert len(loaded) == 4
    assert again.values == report.values
    assert again.checks == report.checks


def test_changed_input_clears_the_cache(tmp_path, kcbs, yuoh):
    pipeline = Contextuality2BellPipeline.from_options(options(tmp_path))
    work = Path(pipeline.working_dir)
    pipeline._check_fingerprint(kcbs)
    assert (work / "fingerprint.json").exists()
    (work / "step1_extension.json").write_text("{}")
    pipeline._check_fingerprint(kcbs)
    assert (work / "step1_extension.json").exists()
    pipeline._check_fingerprint(yuoh)
    assert not (work / "step1_extension.json").exists()


def test_chordal_input_fails_in_step_one(tmp_path):
    t = 0.3
    S = ProjectorSet.from_arrays([[1, 0, 0], [0, 1, 0], [0, 0, 1], [np.cos(t), np.sin(t), 0]])
    pipeline = Contextuality2BellPipeline.from_options(options(tmp_path))
    report = asyncio.run(pipeline(S, name="chordal"))
    assert report.failed_stage == "extend"
    assert report.error.startswith("NotSDC")
    assert report.certificate is None
    assert not report.passed
    assert (tmp_path / "work" / "report.json").exists()


def test_seed_overrides_components(tmp_path, monkeypatch):
    monkeypatch.delenv("CTXFORGE_SEED", raising=False)
    pipeline = Contextuality2BellPipeline.from_options(options(tmp_path), seed=99)
    assert pipeline.gadget_forger.seed == 99
    assert pipeline.sampler.seed == 99
    monkeypatch.setenv("CTXFORGE_SEED", "17")
    assert Contextuality2BellPipeline.from_options(options(tmp_path)).sampler.seed == 17


def test_component_class_path(tmp_path):
    config = options(
        tmp_path,
        sampler={"class_path": "agents.round_sampler.RoundSampler", "init_args": {"rounds": 10, "seed": 3}},
        sic_cert={"init_args": {"max_rounds": 7}},
    )
    pipeline = Contextuality2BellPipeline.from_options(config)
    assert pipeline.sampler.rounds == 10
    assert pipeline.sic_certifier.max_rounds == 7


@pytest.mark.parametrize("name", ["kcbs5.yaml", "yuoh13.yaml", "random_pentagon.yaml"])
def test_shipped_configs_validate(name):
    config = PipelineConfig.model_validate(yaml.safe_load((CONFIG_DIR / name).read_text()))
    assert config.working_dir.startswith(".working_dir/")


def test_unknown_config_keys_are_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("sampling: false\nwork_dir: somewhere\n")
    with pytest.raises(ValidationError):
        Contextuality2BellPipeline.init_from_config(str(path))


def test_skipped_bounds_are_recorded_and_do_not_pass(tmp_path, monkeypatch, caplog):
    import pipelines.contextuality2bell_pipeline as pipeline_module
    from utils.errors import TooLarge

    def too_large(inequality, *args, **kwargs):
        raise TooLarge("nchv enumeration", 13, 12)

    monkeypatch.setattr(pipeline_module, "nchv_bound_bruteforce", too_large)
    with caplog.at_level(logging.WARNING):
        report = run_pipeline(dataset_file("kcbs5"), options(tmp_path), name="kcbs5", seed=2021)
    assert report.failed_stage is None
    assert report.nchv is None and report.lhv is None
    skipped = [c for c in report.checks if c.skipped]
    assert [c.name for c in skipped] == ["bruteforce_bounds"]
    assert not skipped[0].passed
    assert "size 13 exceeds the bound 12" in skipped[0].detail
    assert not report.passed
    assert "SKIPPED" in report.render_table()
    assert any("bruteforce_bounds skipped" in r.getMessage() for r in caplog.records)
