"""Spheres, annuli and dead-ends in Cayley graphs of lamplighter-type
groups: exhaustive enumeration, certified infinite-component detection,
connection thickness, partition entropy, and constructive path
certificates."""

from .groups import (
    DIFFERENT,
    IN_FINITE,
    IN_INFINITE,
    SAME,
    UNKNOWN,
    GeneratorLabel,
    GroupModel,
    make_group,
)
from .metric import (
    BallTable,
    cross_check_lengths,
    enumerate_ball,
    load_table,
    save_table,
    table_for,
)
from .annuli import (
    ABOVE_CAP,
    FULL,
    SPHERE,
    SPHERE_INF,
    AnnulusGraph,
    ComponentPartition,
    build_annulus,
    certify_infinite,
    components,
    connection_thickness,
    connectivity_profile,
    entropy,
    induced_diameter,
    induced_distance,
    sprawl_estimate,
    verify_ladder_cutset,
    almost_convexity_probe,
    streaming_connection_thickness,
)
from .deadends import (
    DeadEndReport,
    find_deadends,
    is_deadend,
    retreat_depth,
    s_infinity_ratio,
    shadow_depth,
    straight_infinity,
    width,
)
from .paths import (
    PathCertificate,
    line_connect_canonical,
    parse_certificate,
    tree_connect_elementary,
    tree_elementary_target,
    verify_certificate,
    zwz_collapse,
)

__version__ = "0.1.0"
