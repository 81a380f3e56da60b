"""Landau/Boltzmann collision-operator toolkit: self-similar rescaling and
profile refutation, backed by the C++ core."""

from ._core import (  # noqa: F401
    CollisionParams,
    Field,
    GridSpec,
    LandauParams,
    SelfSimParams,
    Vec3,
    check_theta_admissible,
    coeff_a,
    coeff_a_min_eigenvalue,
    coeff_c,
    collide,
    compute_force,
    entropy_dissipation,
    evolve_monitors,
    gaussian_field,
    integrate,
    landau_stable_dt,
    lp_norm,
    make_cutoff,
    q2,
    q_landau_divergence,
    q_landau_trace,
    refute_homogeneous,
    second_moment,
    set_thread_count,
    to_selfsim,
    verify_bound_aloinf,
    weak_form_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
