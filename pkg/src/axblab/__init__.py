"""Numerical laboratory for the quantum ax+b group.

Subpackages and modules:

- ``group``: the group law, its subgroups and the groupoids built on them
- ``funcspace``: bump functions, lazy integral expressions, quadrature, norms
- ``algebra``: convolution products and involutions on the groupoid algebras
- ``twist``: twist maps, their operators and the deformed coproduct
- ``semiclassic``: the deformation family and its small-``s`` limit
- ``suites`` / ``report`` / ``cli``: verification runs and their reports
"""

from .errors import AxbLabError, ConfigInvalid
from .report import ResidualReport
from .suites import SUITES, SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = ["AxbLabError", "ConfigInvalid", "ResidualReport", "SUITES", "SuiteConfig", "run_suite", "__version__"]
