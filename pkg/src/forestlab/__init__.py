"""Exact and Monte Carlo tools for degree-weighted random forests and bridge-addable graph classes."""

from .errors import (
    EmptyOrFullSet,
    HypothesisFailed,
    LengthMismatch,
    MalformedInput,
    NotATree,
    NotBridgeAddable,
    NotBridgeAlterable,
    SizeLimitExceeded,
    TieWeightUnsupported,
)
from .forests import (
    MassDistribution,
    connectivity_lower_bound_check,
    enumerate_forests,
    mass,
    mass_distribution,
    tree_partition_closed_form,
)
from .graph import (
    ComponentPartition,
    Forest,
    LabelledGraph,
    WeightVector,
    bridge_core,
    components,
    contract,
    find_bridges,
    parse_graph,
)
from .prufer import (
    PrueferCode,
    decode,
    encode,
    expected_census,
    pendant_census,
    pendant_probability,
    sample_tree,
)

__all__ = [
    "ComponentPartition",
    "EmptyOrFullSet",
    "Forest",
    "HypothesisFailed",
    "LabelledGraph",
    "LengthMismatch",
    "MalformedInput",
    "MassDistribution",
    "NotATree",
    "NotBridgeAddable",
    "NotBridgeAlterable",
    "PrueferCode",
    "SizeLimitExceeded",
    "TieWeightUnsupported",
    "WeightVector",
    "bridge_core",
    "components",
    "connectivity_lower_bound_check",
    "contract",
    "decode",
    "encode",
    "enumerate_forests",
    "expected_census",
    "find_bridges",
    "mass",
    "mass_distribution",
    "parse_graph",
    "pendant_census",
    "pendant_probability",
    "sample_tree",
    "tree_partition_closed_form",
]

__version__ = "0.1.0"
