"""Cooperative slotted-CSMA throughput/bit-cost toolkit.

Closed-form and Monte Carlo evaluation of Direct Link, CoopMAC, and
fairMAC uplink strategies over small quasi-static networks.
"""

from .analytic import (
    CsmaParams,
    OperatingPoint,
    PhaseExpectations,
    asymptotic_performance,
    csma_bitcost,
    csma_performance,
    csma_phase_expectations,
    csma_throughput,
    fairmac_infty_asymptotic,
    rr_performance,
    timeshare,
)
from .contention import compiled_available, make_sampler
from .errors import ProtocolError, SimulationError, ValidationError
from .metrics import (
    PhaseCounts,
    RelativeDeltas,
    TraceSummary,
    finalize,
    node_throughputs,
    relative_to,
)
from .oracle import enumerate_patterns, enumerate_phase
from .protocols import make_protocol
from .scenario import (
    Scenario,
    ScenarioDefaults,
    format_scenario,
    load_scenario,
    parse_scenario_text,
)
from .simengine import Engine, PhaseOutcome, SimConfig, simulate
from .topology import (
    HelperAssignment,
    Network,
    TimingProfile,
    classify,
    select_helper,
    timing,
)

__version__ = "0.1.0"

__all__ = [
    "CsmaParams",
    "Engine",
    "HelperAssignment",
    "Network",
    "OperatingPoint",
    "PhaseCounts",
    "PhaseExpectations",
    "PhaseOutcome",
    "ProtocolError",
    "RelativeDeltas",
    "Scenario",
    "ScenarioDefaults",
    "SimConfig",
    "SimulationError",
    "TimingProfile",
    "TraceSummary",
    "ValidationError",
    "asymptotic_performance",
    "classify",
    "compiled_available",
    "csma_bitcost",
    "csma_performance",
    "csma_phase_expectations",
    "csma_throughput",
    "enumerate_patterns",
    "enumerate_phase",
    "fairmac_infty_asymptotic",
    "finalize",
    "format_scenario",
    "load_scenario",
    "make_protocol",
    "make_sampler",
    "node_throughputs",
    "parse_scenario_text",
    "relative_to",
    "rr_performance",
    "select_helper",
    "simulate",
    "timeshare",
    "timing",
]
