"""B functions, their operator algebra, basis conversions and the two-range addition theorem."""

from .special_core import *  # noqa: F401,F403
from .angular import *  # noqa: F401,F403
from .bfunctions import *  # noqa: F401,F403
from .expansions import *  # noqa: F401,F403
from .translation import *  # noqa: F401,F403
from . import special_core, angular, bfunctions, expansions, translation

__version__ = "0.1.0"

__all__ = (
    special_core.__all__
    + angular.__all__
    + bfunctions.__all__
    + expansions.__all__
    + translation.__all__
)
