"""Bounded lecture hall tableaux: counting, bijections, sampling and limit shapes."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .model import (
    BUILTIN_PROFILES,
    LectureHallTableau,
    Partition,
    Profile,
    Segment,
    builtin_profile,
    conjugate,
    denominator,
    extremal_tableaux,
    is_valid_blht,
    make_partition,
    parse_partition,
    profile_from_partition,
)
from .counting import (
    count_blht,
    count_via_lgv,
    enumerate_blht,
    path_count_between,
    single_path_count,
    single_path_decomposition,
)
from .lattice import (
    DecoratedLattice,
    DimerConfiguration,
    DualPathSystem,
    HeightFunction,
    PathSystem,
    build_lh_graph,
    dimers_to_paths,
    dual_to_paths,
    height_function,
    paths_to_dimers,
    paths_to_dual,
    paths_to_tableau,
    tableau_to_paths,
)
from .cftp import cftp_run, cftp_sample, heat_bath_step, sample_many
from .arctic import curve_point, enumerate_branches, integral_I, sample_curve, tangent_line
from .dimer import edge_probability, kasteleyn_determinant, kasteleyn_matrix
from .burgers import burgers_residual, burgers_solution
from .render import RenderSpec, render
