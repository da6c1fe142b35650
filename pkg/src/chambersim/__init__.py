"""Deterministic digital twin of two benchtop causal chambers.

The package simulates a light tunnel and a wind tunnel: experiment protocols
drive actuators, mechanistic models propagate their effects, and a calibrated
sensor layer produces the measurement stream that is written out in the
published CSV dataset layout. Ground-truth causal graphs ship with the
package, together with a randomized procedure that validates their edges
from interventional data.
"""

from .dataset_io import (
    experiment_names,
    read_experiment,
    read_image,
    read_ppm,
    write_experiment,
    write_ppm,
)
from .engine import (
    ChamberEngine,
    MeasurementRow,
    RowBlock,
    SimulationError,
    run_protocol,
    run_protocol_blocks,
)
from .graphs import (
    GroundTruthGraph,
    edge_precision_recall,
    export_adjacency_csv,
    graph_for,
    known_confounded_pairs,
    read_adjacency_csv,
)
from .params import PRESETS, SimParams, load_params, parse_params_text, preset
from .protocol import (
    Measure,
    Protocol,
    ProtocolError,
    Seed,
    Set,
    Wait,
    load_protocol,
    parse_protocol,
    save_protocol,
    serialize_protocol,
)
from .validation import (
    EdgeResult,
    KsResult,
    LevelReport,
    RankSumResult,
    ks_two_sample,
    level_property,
    rank_sum,
    validate_all,
    validate_edge,
    validate_edges,
    write_report,
)
from .variables import (
    Chamber,
    ChamberVariable,
    Config,
    Kind,
    MAX_HZ,
    columns_for,
    validate_setting,
    variable,
    variables_for,
)
from . import models

__version__ = "0.1.0"

__all__ = [
    "Chamber",
    "ChamberEngine",
    "ChamberVariable",
    "Config",
    "EdgeResult",
    "GroundTruthGraph",
    "Kind",
    "KsResult",
    "LevelReport",
    "MAX_HZ",
    "Measure",
    "MeasurementRow",
    "PRESETS",
    "Protocol",
    "ProtocolError",
    "RankSumResult",
    "RowBlock",
    "Seed",
    "Set",
    "SimParams",
    "SimulationError",
    "Wait",
    "columns_for",
    "edge_precision_recall",
    "experiment_names",
    "export_adjacency_csv",
    "graph_for",
    "known_confounded_pairs",
    "ks_two_sample",
    "level_property",
    "load_params",
    "load_protocol",
    "models",
    "parse_params_text",
    "parse_protocol",
    "preset",
    "rank_sum",
    "read_adjacency_csv",
    "read_experiment",
    "read_image",
    "read_ppm",
    "run_protocol",
    "run_protocol_blocks",
    "save_protocol",
    "serialize_protocol",
    "validate_all",
    "validate_edge",
    "validate_edges",
    "validate_setting",
    "variable",
    "variables_for",
    "write_experiment",
    "write_ppm",
    "write_report",
]
