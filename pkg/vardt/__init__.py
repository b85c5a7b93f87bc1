"""
VarDT: variable-level fault localization for MiniLang programs.

The pipeline narrows a failing program down to suspicious methods with
SBFL, slices them, profiles every variable occurrence of the GSA form and
ranks the variables by how well decision trees over their values separate
failing runs from passing ones.

Modules:
- frontend: MiniLang parser, GSA transformation and dependence analysis
- runtime: instrumented interpreter and trace storage
- sbfl / slicer: method ranking and backward slicing
- dtree: feature tables, prioritization and multi-tree building
- ranker: discriminative scores and the global ranking
- patch_filter: drop candidate patches that touch no localized variable
- evalkit: seeded corpus, ground truth and metrics
"""

from .config import PipelineConfig, SbflFormula, load_config
from .errors import VarDTError
from .patch_filter import filter_patches, load_patches, parse_patches
from .pipeline import LocalizationPipeline, LocalizationResult, localize
from .ranker import RankedVariable, global_rank

__version__ = "1.0.0"
__author__ = "VarDT Authors"
__email__ = "vardt@users.noreply.github.com"
__license__ = "Apache 2.0"
__copyright__ = f"Copyright 2026 {__author__}"

__all__ = [
    "LocalizationPipeline",
    "LocalizationResult",
    "PipelineConfig",
    "RankedVariable",
    "SbflFormula",
    "VarDTError",
    "filter_patches",
    "global_rank",
    "load_config",
    "load_patches",
    "localize",
    "parse_patches",
]
