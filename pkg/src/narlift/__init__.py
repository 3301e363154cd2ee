"""narlift: autoregressive modelling, simulation and spatial detrending of
time series observed on the nodes of a graph."""

from .graph import Graph, NeighborSet, pair_graph
from .series import (
    FormatError,
    NetworkTimeSeries,
    center_nodes,
    load_graph,
    load_graph_or_sequence,
    load_graph_sequence,
    load_series,
    log1_transform,
    population_correct,
    save_graph,
    save_graph_sequence,
    save_series,
)
from .model import (
    WEIGHT_CONVENTIONS,
    AnovaTable,
    Design,
    FittedNar,
    NarModel,
    NarParams,
    NarSpec,
    RankDeficientError,
    anova,
    build_design,
    fit_nar,
    forecast,
    neighbor_weights,
    predict_nar,
    stage_weight_matrix,
)
from .simulate import (
    ExplosiveSeriesWarning,
    SimConfig,
    companion_spectral_radius,
    simulate_nar,
    simulate_var1_pair,
    transition_matrices,
)
from .lifting import (
    DensityComparison,
    IsolatedNodeWarning,
    LiftResult,
    NetworkDifferencer,
    detrend,
    detrend_summary,
    network_difference,
)
from .diagnostics import (
    Correlogram,
    ResidualPanel,
    acf,
    ccf,
    default_max_lag,
    pacf,
    residual_panel,
)
from .var1 import (
    Lag1Covariances,
    RegionGrid,
    Var1Derived,
    Var1Params,
    abs_cov_reduction,
    cross_correlation,
    is_stationary,
    lag1_covariances,
    region_grid,
    stationary_covariance,
    var1_summary,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "NeighborSet",
    "pair_graph",
    "NetworkTimeSeries",
    "FormatError",
    "log1_transform",
    "population_correct",
    "center_nodes",
    "load_series",
    "save_series",
    "load_graph",
    "save_graph",
    "load_graph_sequence",
    "save_graph_sequence",
    "load_graph_or_sequence",
    "WEIGHT_CONVENTIONS",
    "NarSpec",
    "NarParams",
    "FittedNar",
    "Design",
    "AnovaTable",
    "RankDeficientError",
    "neighbor_weights",
    "stage_weight_matrix",
    "build_design",
    "fit_nar",
    "forecast",
    "predict_nar",
    "anova",
    "NarModel",
    "SimConfig",
    "ExplosiveSeriesWarning",
    "simulate_nar",
    "simulate_var1_pair",
    "transition_matrices",
    "companion_spectral_radius",
    "LiftResult",
    "DensityComparison",
    "IsolatedNodeWarning",
    "network_difference",
    "detrend",
    "detrend_summary",
    "NetworkDifferencer",
    "Correlogram",
    "ResidualPanel",
    "acf",
    "ccf",
    "pacf",
    "residual_panel",
    "default_max_lag",
    "Var1Params",
    "Var1Derived",
    "Lag1Covariances",
    "RegionGrid",
    "is_stationary",
    "stationary_covariance",
    "cross_correlation",
    "lag1_covariances",
    "abs_cov_reduction",
    "var1_summary",
    "region_grid",
]
