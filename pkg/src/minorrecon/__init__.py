"""Reconfiguration of graph minor models (H-models) on small host graphs."""

from .graph_core import Graph, block_tree, canonical_form, is_k_connected, split_vertex
from .models import HModel, enumerate_models, validate_model
from .recon import ReconSequence, build_recon_graph, find_path, is_host, legal_step, replay

__all__ = [
    "Graph",
    "HModel",
    "ReconSequence",
    "block_tree",
    "build_recon_graph",
    "canonical_form",
    "enumerate_models",
    "find_path",
    "is_host",
    "is_k_connected",
    "legal_step",
    "replay",
    "split_vertex",
    "validate_model",
]

__version__ = "0.1.0"
