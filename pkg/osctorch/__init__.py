"""Coupled identical harmonic oscillators on networks, in PyTorch."""

from . import core
from . import network
from . import dynamics
from . import tools
from . import io
