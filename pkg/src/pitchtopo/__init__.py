"""Persistent homology of pitch-class transition graphs.

Pipeline: MIDI notes -> 12x12 transition matrix -> weighted digraph ->
label-vertex undirected graph -> inverse-weight shortest-path metric ->
Vietoris-Rips filtration -> Z/2 barcodes (H0, H1) -> mean / sd / entropy
-> per-work 24-vector -> PCA and dispersion.
"""

from .analysis import CorpusProjection, WorkDescriptor, dispersion, pca_2d, work_descriptor
from .descriptors import BarcodeStats, barcode_stats, persistent_entropy, persistent_mean, persistent_sd
from .filtration import Filtration, build_vr_filtration
from .graph import (
    FiniteMetricSpace,
    WeightedDigraph,
    WeightedUndirectedGraph,
    associate_undirected,
    digraph_from_adjacency,
    weight_metric,
)
from .midi import MidiParseError, NoteEvent, parse_midi, read_midi
from .persistence import Bar, Barcode, FiltrationOrderError, compute_persistence
from .pipeline import RunConfig, analyze_track, matrix_barcodes
from .transitions import RestMode, TransitionMatrix, durational_accent, transition_matrix

__version__ = "0.1.0"
