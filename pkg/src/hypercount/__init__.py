"""Counterexample matroids with many hyperplanes and no long line minor."""

from .analysis import (
    Report,
    bonin_bound,
    bruteforce_minor_oracle,
    check_corollary_bound,
    check_lemma24_inequality,
    count_lines,
    count_lines_avoiding,
    in_U,
    kung_point_check,
    max_rank2_minor_points,
    verify_counterexample,
)
from .constructions import (
    MqtArtifacts,
    TowerSpec,
    build_mqt,
    build_tower,
    choose_triangle,
    lower_bound_family,
    select_params_corollary,
    select_params_lemma,
)
from .finite_geometry import FieldSpec, field_arith, make_field, pg_lines_plane, pg_points
from .matroid_core import (
    Flat,
    Linear,
    LineSetRank3,
    Matroid,
    ParallelConn,
    Uniform,
    circuits_bruteforce,
    closure,
    flats_by_rank,
    hyperplanes,
    parallel_connection,
    rank,
)

__version__ = "0.1.0"
