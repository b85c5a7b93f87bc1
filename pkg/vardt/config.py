#!/usr/bin/env python3
"""
Pipeline configuration for VarDT.

Settings resolve in the order: explicit keyword arguments (the CLI passes
only the flags the user actually supplied) > ``VARDT_*`` environment
variables (a ``.env`` file is honoured) > built-in defaults.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

DEFAULT_DEP_FACTOR = 0.8
DEFAULT_TOP_K = 10
DEFAULT_STEP_BUDGET = 1_000_000


class SbflFormula(str, Enum):
    """Method-level localizers available to the first pipeline stage."""
    OCHIAI = "ochiai"
    DSTAR = "dstar"


class PipelineConfig(BaseSettings):
    """All knobs of one localization run, including the ablation switches."""

    model_config = SettingsConfigDict(
        env_prefix="VARDT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    dep_factor: float = Field(default=DEFAULT_DEP_FACTOR)
    top_k_methods: int = Field(default=DEFAULT_TOP_K)
    sbfl_formula: SbflFormula = SbflFormula.OCHIAI
    slicing: bool = True
    tree_model: bool = True
    dep_penalty: bool = True
    method_score: bool = True
    method_known: Optional[str] = None
    top_n: int = 10
    jobs: int = 1
    step_budget: int = DEFAULT_STEP_BUDGET
    out_dir: Optional[Path] = None

    @field_validator("dep_factor")
    @classmethod
    def _check_dep_factor(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError(f"dep_factor must lie in (0, 1], got {value}")
        return value

    @field_validator("top_k_methods", "top_n", "jobs", "step_budget")
    @classmethod
    def _check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"expected a value >= 1, got {value}")
        return value

    @property
    def effective_dep_factor(self) -> float:
        """Penalty factor actually applied; 1.0 turns the penalty off."""
        return self.dep_factor if self.dep_penalty else 1.0

    def ablation_name(self) -> str:
        if not self.slicing:
            return "VarDT_slice"
        if not self.tree_model:
            return "VarDT_tree"
        if not self.dep_penalty:
            return "VarDT_dep"
        if not self.method_score:
            return "VarDT_ms"
        if self.method_known:
            return "VarDT_mk"
        return "VarDT"

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        """Return a copy with the given fields replaced (validators re-run)."""
        data: Dict[str, Any] = self.model_dump()
        data.update(overrides)
        return PipelineConfig(**data)


def ablation_configs(base: PipelineConfig) -> Dict[str, PipelineConfig]:
    """The full configuration plus the single-component ablations."""
    variants = {
        "VarDT": base,
        "VarDT_slice": base.with_overrides(slicing=False),
        "VarDT_tree": base.with_overrides(tree_model=False),
        "VarDT_dep": base.with_overrides(dep_penalty=False),
        "VarDT_ms": base.with_overrides(method_score=False),
    }
    logger.debug(f"Prepared {len(variants)} ablation variants")
    return variants


def load_config(**flags: Any) -> PipelineConfig:
    """Build a config from explicitly supplied flags; ``None`` means unset."""
    supplied = {key: value for key, value in flags.items() if value is not None}
    config = PipelineConfig(**supplied)
    logger.debug(f"Loaded configuration {config.ablation_name()}: {config.model_dump()}")
    return config
