"""Channel-network logic gates grown by root apexes: model, engine, compiler."""

from .engine import (
    Engine,
    RootApex,
    SimOutcome,
    SimulationError,
    TieContentionError,
    TiePolicy,
    TraceEvent,
    apply_delay_insensitivity_probe,
    simulate,
)
from .gates import (
    GATE_BUILDERS,
    GATE_EXPECTATIONS,
    GateParams,
    build_attraction_gate,
    build_basic_gravity_gate,
    build_gravity_gate_2x2,
    build_gravity_gate_3x3,
    build_half_adder,
)
from .netlist import (
    CompileError,
    GateInstance,
    Netlist,
    ParseError,
    compile_netlist,
    eval_oracle,
    netlist_to_text,
    parse_netlist,
)
from .network import (
    Channel,
    ChannelNetwork,
    Junction,
    OccupancyState,
    Port,
    RouteEntry,
    channels_crossing_at,
    load_network,
    network_from_dict,
    network_to_dict,
    network_to_json,
    path_length,
    save_network,
    validate_network,
)
from .render import render_svg
from .tropism import (
    RoutingError,
    TropismRegime,
    attraction_routing,
    gravity_routing,
    route_network,
)
from .verify import TruthTable, VerifyReport, enumerate_truth_table, verify_against

__all__ = [
    "Engine",
    "RootApex",
    "SimOutcome",
    "SimulationError",
    "TieContentionError",
    "TiePolicy",
    "TraceEvent",
    "apply_delay_insensitivity_probe",
    "simulate",
    "GATE_BUILDERS",
    "GATE_EXPECTATIONS",
    "GateParams",
    "build_attraction_gate",
    "build_basic_gravity_gate",
    "build_gravity_gate_2x2",
    "build_gravity_gate_3x3",
    "build_half_adder",
    "CompileError",
    "GateInstance",
    "Netlist",
    "ParseError",
    "compile_netlist",
    "eval_oracle",
    "netlist_to_text",
    "parse_netlist",
    "Channel",
    "ChannelNetwork",
    "Junction",
    "OccupancyState",
    "Port",
    "RouteEntry",
    "channels_crossing_at",
    "load_network",
    "network_from_dict",
    "network_to_dict",
    "network_to_json",
    "path_length",
    "save_network",
    "validate_network",
    "render_svg",
    "RoutingError",
    "TropismRegime",
    "attraction_routing",
    "gravity_routing",
    "route_network",
    "TruthTable",
    "VerifyReport",
    "enumerate_truth_table",
    "verify_against",
]
