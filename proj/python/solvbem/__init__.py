"""Boundary-element solvers for implicit-solvent electrostatics."""

from ._solvbem import (  # noqa: F401
    ConvergenceError,
    DielectricModel,
    InputError,
    SingularEvaluation,
    Solute,
    SurfaceMesh,
    Vec3,
    asym_quadratic_model,
    born_energy,
    charging_curve,
    coulomb_constant,
    h_of_en,
    icosphere,
    kirkwood_energy,
    load_mesh,
    load_pqr,
    nonlocal_sphere_energy,
    solve_nlbc,
    solve_nonlocal,
    solve_pcm,
    solver_config,
    union_of_spheres_mesh,
)

__all__ = [
    "ConvergenceError",
    "DielectricModel",
    "InputError",
    "SingularEvaluation",
    "Solute",
    "SurfaceMesh",
    "Vec3",
    "asym_quadratic_model",
    "born_energy",
    "charging_curve",
    "coulomb_constant",
    "h_of_en",
    "icosphere",
    "kirkwood_energy",
    "load_mesh",
    "load_pqr",
    "nonlocal_sphere_energy",
    "solve_nlbc",
    "solve_nonlocal",
    "solve_pcm",
    "solver_config",
    "union_of_spheres_mesh",
]
