"""Pattern mining for chiller telemetry.

Detects operational cycles in multi-channel sensor data, represents each
cycle as a symbol-histogram feature vector, clusters cycles
hierarchically, validates the tree against a dynamic-time-warping
baseline via cophenetic correlation, and labels cycles by efficiency.
"""

__version__ = "0.1.0"

from .bowr import BowVector, Vocabulary, bow_distance, build_bow, build_vocabulary
from .dtw import DtwConfig, dtw_distance, dtw_matrix
from .hcluster import (
    Dendrogram,
    DistanceMatrix,
    LINKAGE_METHODS,
    cophenetic_correlation,
    cophenetic_distances,
    cut_tree,
    linkage,
)
from .metrics import (
    CycleEfficiency,
    EfficiencyBands,
    cop_carnot,
    cop_therm,
    cycle_efficiency,
)
from .report import PipelineConfig, RunReport, compare_methods, run_pipeline
from .segmentation import KMeansConfig, OnCycle, StateMask, detect_states, extract_cycles, kmeans
from .symbolic import SaxConfig, SymbolSequence, gaussian_breakpoints, paa, symbolize, zscore
from .syngen import CycleTemplate, ScenarioSpec, generate, three_class_corpus
from .timeseries import (
    ChannelSpec,
    GapReport,
    TimeSeriesTable,
    default_chiller_schema,
    detect_gaps,
    ingest_csv,
    load_schema,
)
