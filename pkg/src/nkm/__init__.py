"""Two-torus actions on the homogeneous nearly Kaehler six-manifolds and their multi-moment maps."""

from .models import SPACES, TorusSpec, get_space

__version__ = "0.1.0"

__all__ = ["SPACES", "TorusSpec", "get_space", "__version__"]
