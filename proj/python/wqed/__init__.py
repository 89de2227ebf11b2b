"""Waveguide QED toolkit: Python bindings to the C++ library."""

from ._wqed import *  # noqa: F401,F403
from ._wqed import __version__  # noqa: F401
