"""Time-aware diameter metrics for temporal contact networks.

The package is organised around a small pipeline:

``temporal_graph``
    storage, ingestion, and transformation of timestamped contact data
``flow``
    deterministic spreading (earliest-arrival) simulation
``diameters``
    effective / peak / one-third-coverage diameters on flow traces
``analytic``
    closed-form and recurrence estimates of the same quantities
``generator``
    random temporal graphs with prescribed degree distributions
``experiments``
    sweeps, removal studies, correlations, and delimited reports
``cli``
    command line front end (``tempodia`` console script)
"""

__version__ = "0.1.0"

from .temporal_graph import (
    ContactEvent,
    EmptyInputError,
    ParseError,
    StaticProjection,
    TemporalGraph,
    contact_durations,
    contact_gaps,
    ingest_sociopatterns,
    read_graph,
    remove_nodes,
    static_projection,
    write_graph,
)
from .flow import FlowTrace, propagate, propagate_all, shortest_arrival
from .diameters import (
    DiameterReport,
    SourceDiameters,
    network_diameters,
    source_diameters,
)
from .analytic import (
    GrowthCurve,
    ModelParams,
    effective_diameter_estimate,
    log_growth_estimate,
    logistic_peak_estimate,
    recurrence_curve,
    tau_estimate,
)
from .generator import GenerationError, GeneratorConfig, generate
from .experiments import (
    BinnedCounts,
    CorrelationMatrix,
    DistributionReport,
    RemovalRow,
    RemovalSweep,
    SweepPoint,
    SweepResult,
    correlations,
    degree_sweep,
    distribution_report,
    error_metrics,
    log2_bins,
    removal_sweep,
    size_sweep,
)

__all__ = [
    "BinnedCounts",
    "ContactEvent",
    "CorrelationMatrix",
    "DiameterReport",
    "DistributionReport",
    "EmptyInputError",
    "FlowTrace",
    "GenerationError",
    "GeneratorConfig",
    "GrowthCurve",
    "ModelParams",
    "ParseError",
    "RemovalRow",
    "RemovalSweep",
    "SourceDiameters",
    "StaticProjection",
    "SweepPoint",
    "SweepResult",
    "TemporalGraph",
    "contact_durations",
    "contact_gaps",
    "correlations",
    "degree_sweep",
    "distribution_report",
    "effective_diameter_estimate",
    "error_metrics",
    "generate",
    "ingest_sociopatterns",
    "log2_bins",
    "log_growth_estimate",
    "logistic_peak_estimate",
    "network_diameters",
    "propagate",
    "propagate_all",
    "read_graph",
    "recurrence_curve",
    "removal_sweep",
    "remove_nodes",
    "shortest_arrival",
    "size_sweep",
    "source_diameters",
    "static_projection",
    "tau_estimate",
    "write_graph",
]
