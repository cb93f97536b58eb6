from .flow import (
    TYPE1,
    TYPE2,
    Crossing,
    HoneyFlow,
    UnitPath,
    canonical_honeycomb_flow,
    check_honeycomb_flow,
    cut_set,
    detect_noncanonical,
    flows_equal,
    overlay_flow,
    replay_trace_on_flow,
)
from .geometry import (
    EMPTY_HONEYCOMB,
    AtomicSegmentSet,
    Honeycomb,
    HoneyPoint,
    Segment,
    atomize,
    honeycomb_from_filling,
    honeycomb_from_graph,
    honeycomb_type,
    honeycombs_equal,
    overlay,
    transverse_crossings,
)
from .render import render_svg

__all__ = [
    "EMPTY_HONEYCOMB",
    "TYPE1",
    "TYPE2",
    "AtomicSegmentSet",
    "Crossing",
    "HoneyFlow",
    "Honeycomb",
    "HoneyPoint",
    "Segment",
    "UnitPath",
    "atomize",
    "canonical_honeycomb_flow",
    "check_honeycomb_flow",
    "cut_set",
    "detect_noncanonical",
    "flows_equal",
    "honeycomb_from_filling",
    "honeycomb_from_graph",
    "honeycomb_type",
    "honeycombs_equal",
    "overlay",
    "overlay_flow",
    "render_svg",
    "replay_trace_on_flow",
    "transverse_crossings",
]
