"""Geometric formulation of finite-level quantum mechanics.

Hermitian operators become quadratic functions and vector fields on the
realified Hilbert space ``R^{2n}``; pure states live on its projective
quotient, mixed states on the dual of the unitary algebra.  Submodules:

``hermitian``    operators, brackets, Lie-Jordan axioms, deformed metrics
``kahler``       realification, Kahler tensors, linear fields, Lie closure
``projective``   expectation functions, projective tensors and fields, critical points
``coadjoint``    momentum maps, Heisenberg fields, Bloch coordinates
``density``      positive cone, density states, rank strata, GL actions
``kraus``        Kraus maps, Choi matrices, invertibility
``lindblad``     GKLS generators and their integration
``gns``          GNS construction for ``M_n(C)``
``flows``        RK4 integration, flow commutation, figure presets
``checks``       randomized invariant suites
"""

from .coadjoint import check_mu_related, momentum_map, momentum_map_projective
from .density import DensityMatrix, PositiveOperator
from .flows import IntegrationError, IntegratorConfig, Trajectory, flows_commute, integrate
from .gns import AlgebraState, build_gns, decompose, gelfand_ideal, is_cyclic
from .hermitian import PAULI, SIGMA0, SIGMA1, SIGMA2, SIGMA3, gellmann_basis, jordan_bracket, lie_bracket
from .kahler import (
    dilation_field,
    gradient_field,
    hamiltonian_field,
    kahler_tensors,
    lie_closure,
    phase_field,
)
from .kraus import KrausFamily, choi
from .lindblad import DiagonalGKLS, GKLSSpec, apply_diagonal, apply_generator, diagonalize, evolve
from .projective import (
    critical_points,
    expectation,
    projective_gradient,
    projective_hamiltonian,
    same_ray,
)

__version__ = "0.1.0"
