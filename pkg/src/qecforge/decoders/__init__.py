"""Decoders from exact enumeration to matching, Union-Find and belief propagation."""

from __future__ import annotations

from typing import Dict, Optional

from .bp import BpDecoder, BpOsd0Decoder, BpResult, bp_decode, bp_osd0_decode, osd0
from .common import Decoder, DecoderError, IncompatibleDecoder, InfeasibleSyndrome, llr_weights
from .graph import DecodingGraph, Edge, NotGraphLike, build_decoding_graph
from .judge import Judgement, Outcome, judge_batch, logical_failure
from .lookup import LookupDecoder, LookupResult, LookupTable, consistent_correction, lookup_decode
from .matching import Matching, MwpmDecoder, OddDefects, match_defects, min_weight_pairing_dp, mwpm_decode
from .mle import DmldDecoder, DmldResult, MleDecoder, dmld_decode, exact_success_probability, mle_decode
from .unionfind import UnionFindDecoder, unionfind_decode

DECODERS = {
    "lookup": LookupDecoder,
    "mle": MleDecoder,
    "dmld": DmldDecoder,
    "mwpm": MwpmDecoder,
    "unionfind": UnionFindDecoder,
    "bp": BpDecoder,
    "bp_osd0": BpOsd0Decoder,
}

OPTION_KEYS = {"max_iter", "clamp", "exact_matching", "max_weight", "max_dim"}


def make_decoder(name: str, model, options: Optional[Dict] = None, code=None) -> Decoder:
    """Instantiate a registered decoder for a detector model."""
    try:
        cls = DECODERS[name]
    except KeyError:
        raise KeyError(f"unknown decoder {name!r}; known: {sorted(DECODERS)}") from None
    unknown = set(options or {}) - OPTION_KEYS
    if unknown:
        raise ValueError(f"unknown decoder options {sorted(unknown)}")
    return cls(model, options, code)


__all__ = [
    "DECODERS",
    "BpDecoder",
    "BpOsd0Decoder",
    "BpResult",
    "Decoder",
    "DecoderError",
    "DecodingGraph",
    "DmldDecoder",
    "DmldResult",
    "Edge",
    "IncompatibleDecoder",
    "InfeasibleSyndrome",
    "Judgement",
    "LookupDecoder",
    "LookupResult",
    "LookupTable",
    "Matching",
    "MleDecoder",
    "MwpmDecoder",
    "NotGraphLike",
    "OddDefects",
    "Outcome",
    "UnionFindDecoder",
    "bp_decode",
    "bp_osd0_decode",
    "build_decoding_graph",
    "consistent_correction",
    "dmld_decode",
    "exact_success_probability",
    "judge_batch",
    "llr_weights",
    "logical_failure",
    "lookup_decode",
    "make_decoder",
    "match_defects",
    "min_weight_pairing_dp",
    "mle_decode",
    "mwpm_decode",
    "osd0",
    "unionfind_decode",
]
