"""Low-level utilities used everywhere."""

from . import constants    # numerical thresholds
from . import datasets     # dataset directory lookup
from . import errors       # exception hierarchy
from . import linalg       # symmetric eigensolvers and spectral calculus
from . import optionals    # optional dependencies (numpy, scipy)
from . import options      # option structures
from . import utils        # pytorch utilities
