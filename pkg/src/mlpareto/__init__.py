"""Approximate Pareto frontiers of community partitions on multi-layer networks."""
from .errors import ConvergenceError, InputError
from .layers import (
    GeoLayerConfig,
    GeoPoint,
    TagRecord,
    align_universes,
    build_geo_layer,
    build_tag_layer,
    haversine_km,
)
from .network import MultiLayerNetwork, Partition, build_network, community_members, degree
from .objectives import (
    MoveDelta,
    ObjectiveVector,
    confusion_matrix,
    cut,
    move_delta,
    nmi,
    objective_vector,
    ratio_cut,
)
from .pareto import (
    FrontierPoint,
    FrontierResult,
    align_labels,
    dominates,
    frontier,
    frontier_multilayer,
    knee_point,
    non_dominated_filter,
    traverse_frontier,
)
from .spectral import SpectralConfig, SpectralEmbedding, embed, kmeans, laplacian, spectral_partition

__version__ = "0.1.0"
