"""Structural codes for mathematical expressions, invariant to symbol names."""

from .canonical import CanonicalGraph, canonicalize, order_vertices, sort_children
from .config import EncoderConfig, load_config, parse_config
from .encode import CanonicalCode, code_distance, encode, parse_code
from .expr import binarize
from .graph import ExpressionGraph, VertexLabel, build_graph
from .index import CorpusEntry, CorpusIndex, index_build, index_query, load_index, save_index
from .oracle import EvalReport, IsoVerdict, evaluate, gen_random_expr, iso_oracle
from .parser import parse, parse_expression, tokenize, unparse

__all__ = [
    "CanonicalCode", "CanonicalGraph", "CorpusEntry", "CorpusIndex", "EncoderConfig",
    "EvalReport", "ExpressionGraph", "IsoVerdict", "VertexLabel", "binarize", "build_graph",
    "canonicalize", "code_distance", "encode", "evaluate", "gen_random_expr", "index_build",
    "index_query", "iso_oracle", "load_config", "load_index", "order_vertices", "parse",
    "parse_code", "parse_config", "parse_expression", "save_index", "sort_children",
    "tokenize", "unparse",
]
