"""Finite-horizon tools for nonautonomous discrete dynamical systems."""

from .errors import ConfigError, DomainError, EmptySetError, NDSError
from .space import PointSet, Space, covering_radius, distance, epsilon_cluster, grid, hausdorff
from .maps import (
    Catalog,
    Composition,
    MapRep,
    PiecewiseLinear,
    compose,
    eval_map,
    identity,
    image_set,
    lipschitz_bound,
    map_from_spec,
    self_map_check,
)
from .system import (
    ConvergentFamily,
    Conjugated,
    Explicit,
    Family,
    Gamma,
    Induced,
    PeriodicTail,
    Shifted,
    System,
    induce,
    iterate,
    iterate_map,
    nth_map,
    orbit_array,
    periodic_reduce,
    shift,
    star_iterate,
    trajectory,
)
from .analysis import (
    ConstantView,
    IteratesView,
    MapsView,
    asymptotic_report,
    equicontinuity,
    omega_limit,
    pointwise_limit_profile,
    uniform_limit,
)
from .verify import (
    VerdictReport,
    check_action,
    check_conjugacy,
    check_induced,
    check_kempf,
    check_periodic,
    check_periodic_point,
    check_split,
    check_uniap,
    find_fixed_point,
)
from .scenario import list_fixtures, load_fixture, load_scenario, parse_scenario, run_scenario

__version__ = "0.1.0"
