from ._core import (
    QghError,
    commutator_norm,
    distq_bracket,
    fejer_delta,
    gh_distance,
    lip_dual,
    radius_diameter,
    run_cli,
    window_norm,
)

__all__ = [
    "QghError",
    "commutator_norm",
    "distq_bracket",
    "fejer_delta",
    "gh_distance",
    "lip_dual",
    "radius_diameter",
    "run_cli",
    "window_norm",
]
