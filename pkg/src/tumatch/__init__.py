"""Stable many-to-one matching through demand types, total unimodularity and
integral vertices of a linear system."""
from .continuum import (
    PseudoMatching,
    choose_continuum,
    is_stable_pseudo,
    lift_to_discrete,
    transform_type1,
    transform_type2,
    transform_type3,
)
from .converse import ProbeResult, probe_converse
from .demand import (
    DemandType,
    demand_type_bruteforce,
    demand_type_fast,
    firm_demand_types,
    is_totally_unimodular,
    is_unimodular,
    market_demand_type,
)
from .errors import (
    BudgetExceeded,
    InternalError,
    MalformedInput,
    PreconditionError,
    SearchExhausted,
    TumatchError,
)
from .market import (
    NULL,
    DiscreteMatching,
    FirmPreference,
    Market,
    WorkerPreference,
    choose,
    enumerate_stable_matchings,
    find_blocking_coalition,
    is_stable,
    is_substitutable,
)
from .rounding import build_system, find_integral_vertex, solve, vertex_to_matching
from .search import SearchConfig, find_stable_continuum, verify_stable_continuum
from .techtree import TechnologyTree, certify_specialist_market, network_matrices

__all__ = [
    "ProbeResult",
    "probe_converse",
    "NULL",
    "BudgetExceeded",
    "DemandType",
    "DiscreteMatching",
    "FirmPreference",
    "InternalError",
    "MalformedInput",
    "Market",
    "PreconditionError",
    "PseudoMatching",
    "SearchConfig",
    "SearchExhausted",
    "TechnologyTree",
    "TumatchError",
    "WorkerPreference",
    "build_system",
    "choose",
    "choose_continuum",
    "demand_type_bruteforce",
    "demand_type_fast",
    "enumerate_stable_matchings",
    "find_blocking_coalition",
    "find_integral_vertex",
    "find_stable_continuum",
    "firm_demand_types",
    "is_stable",
    "is_stable_pseudo",
    "is_substitutable",
    "is_totally_unimodular",
    "is_unimodular",
    "lift_to_discrete",
    "market_demand_type",
    "network_matrices",
    "solve",
    "transform_type1",
    "transform_type2",
    "transform_type3",
    "verify_stable_continuum",
    "certify_specialist_market",
    "vertex_to_matching",
]
