"""High-level analyses built on the modal solvers."""

from . import synchronization
from . import resonance
from . import swing
from . import polar
