#!/usr/bin/env python3
"""
Tests for pipeline configuration and its precedence rules.
"""

import pytest
from pydantic import ValidationError

from vardt.config import PipelineConfig, SbflFormula, ablation_configs, load_config


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("VARDT_DEP_FACTOR", "VARDT_TOP_N", "VARDT_SLICING", "VARDT_SBFL_FORMULA"):
        monkeypatch.delenv(name, raising=False)


class TestPipelineConfig:
    """Defaults, validation and precedence."""

    def test_defaults(self):
        config = load_config()
        assert config.dep_factor == 0.8
        assert config.top_k_methods == 10
        assert config.sbfl_formula is SbflFormula.OCHIAI
        assert config.ablation_name() == "VarDT"
        assert config.out_dir is None

    def test_environment_beats_defaults(self, monkeypatch):
        monkeypatch.setenv("VARDT_DEP_FACTOR", "0.5")
        monkeypatch.setenv("VARDT_SBFL_FORMULA", "dstar")
        config = load_config()
        assert config.dep_factor == 0.5
        assert config.sbfl_formula is SbflFormula.DSTAR

    def test_flags_beat_environment(self, monkeypatch):
        monkeypatch.setenv("VARDT_DEP_FACTOR", "0.5")
        assert load_config(dep_factor=0.3).dep_factor == 0.3
        assert load_config(dep_factor=None).dep_factor == 0.5

    @pytest.mark.parametrize("overrides", [
        {"dep_factor": 0.0}, {"dep_factor": 1.5}, {"top_n": 0}, {"jobs": 0}, {"sbfl_formula": "tarantula"},
    ])
    def test_rejects_invalid_values(self, overrides):
        with pytest.raises(ValidationError):
            load_config(**overrides)

    def test_dep_penalty_switch(self):
        assert PipelineConfig(dep_factor=0.4).effective_dep_factor == 0.4
        assert PipelineConfig(dep_factor=0.4, dep_penalty=False).effective_dep_factor == 1.0

    def test_with_overrides_revalidates(self):
        base = PipelineConfig()
        assert base.with_overrides(top_n=3).top_n == 3
        assert base.top_n == 10
        with pytest.raises(ValidationError):
            base.with_overrides(dep_factor=2.0)


class TestAblations:
    """Named single-component ablations."""

    def test_names(self):
        variants = ablation_configs(PipelineConfig())
        assert list(variants) == ["VarDT", "VarDT_slice", "VarDT_tree", "VarDT_dep", "VarDT_ms"]
        for name, config in variants.items():
            assert config.ablation_name() == name

    def test_each_variant_turns_off_one_component(self):
        variants = ablation_configs(PipelineConfig())
        assert not variants["VarDT_slice"].slicing and variants["VarDT_slice"].tree_model
        assert not variants["VarDT_tree"].tree_model
        assert variants["VarDT_dep"].effective_dep_factor == 1.0
        assert not variants["VarDT_ms"].method_score

    def test_method_known(self):
        assert PipelineConfig(method_known="createNumber").ablation_name() == "VarDT_mk"
