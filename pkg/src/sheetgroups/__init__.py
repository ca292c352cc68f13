"""Recover versioned-spreadsheet evolution groups from an unlabeled corpus."""

__version__ = "0.1.0"

from .cluster import Clustering, EvolutionGroup, Thresholds, cluster  # noqa: E402
from .evaluate import EvalReport, diff_groups, evaluate  # noqa: E402
from .features import build_features  # noqa: E402
from .grid import CellValue, Workbook, Worksheet, load_canonical, save_canonical  # noqa: E402
from .ingest import convert_file, scan_corpus  # noqa: E402
from .similarity import SpreadsheetFeatures, sim_spreadsheets, sim_to_group, sim_worksheets  # noqa: E402
from .train import GridResult, LabeledPartition, grid_search, overall_f  # noqa: E402

__all__ = [
    "CellValue", "Clustering", "EvalReport", "EvolutionGroup", "GridResult", "LabeledPartition",
    "SpreadsheetFeatures", "Thresholds", "Workbook", "Worksheet", "build_features", "cluster",
    "convert_file", "diff_groups", "evaluate", "grid_search", "load_canonical", "overall_f",
    "save_canonical", "scan_corpus", "sim_spreadsheets", "sim_to_group", "sim_worksheets",
]
