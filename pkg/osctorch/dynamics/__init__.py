"""Closed-form dynamics of coupled harmonic oscillators."""

from ._types import (CouplingConfig, REGIMES, regime, ScalarDrive, NoDrive,
                     Sinusoid, ConstantPower, State, Trajectory, GEigenpair)
from ._modal import mode_solve
from ._system import (build_G, eig_G, evolve, propagators, expm_via_modes,
                      energy, trajectory_energy)
from . import oracle
