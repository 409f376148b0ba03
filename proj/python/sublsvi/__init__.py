"""LSH-backed maximum inner product search and sublinear value iteration."""

try:
    # Installed layout: the extension lives inside the package.
    from ._sublsvi import *  # noqa: F401,F403
    from ._sublsvi import __doc__ as _doc
except ImportError:
    # Build-tree layout: the extension sits on PYTHONPATH next to the package.
    from _sublsvi import *  # noqa: F401,F403
    from _sublsvi import __doc__ as _doc

__doc__ = _doc

__all__ = [
    "MatNormIndex",
    "MaxIpIndex",
    "MdpInstance",
    "brute_force_matnorm",
    "brute_force_maxip",
    "generate_linear_mdp",
    "kappa",
    "lift_data",
    "load_mdp",
    "mat_norm",
    "optimal_values",
    "quantize_query",
    "rho_theory",
    "rho_upper_bound",
    "run_lsvi",
    "run_lsvi_ucb",
    "save_mdp",
    "transform_data_point",
    "transform_query",
    "validate",
]
