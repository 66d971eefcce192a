"""Linear network error correction on acyclic networks: minimum cuts,
primary edge subsets, field-size bounds, and code construction/decoding."""

from .estimator import LnecEncoder, as_network
from .exceptions import (
    AmbiguousDecodingError,
    ConstructionError,
    DecodingError,
    LnecError,
    NoSolutionError,
    NotDecodableError,
    ScanGuardError,
    ValidationError,
)
from .galois import GF, field_arith, rank, solve_left, trivial_intersection
from .lneccode import (
    ErrorVector,
    LnecCode,
    SinkView,
    check_equivalence,
    construct,
    decode,
    derive_kernels,
    distance,
    is_decodable,
    is_mds,
    min_distance,
    sink_view,
    transmit,
    verify_path_sums,
    verify_equivalence,
)
from .mincut import (
    max_flow_unit,
    mincut_edges_to_node,
    mincut_node_to_edges,
    primary_min_cut,
    source_capacity,
)
from .netgraph import (
    Network,
    ancestral_order,
    parse_network,
    partition_reachable,
    reachable_edges,
    read_network,
)
from .primaries import (
    BoundReport,
    classify_by_primary,
    correctable_family,
    count_correctable,
    enumerate_primary,
    enumerate_R,
    field_size_bound,
    mds_field_size_bound,
)

__version__ = "0.1.0"
