"""Discrete Wigner functions of finite quantum systems.

W is recovered from Weyl-ordered moments through two inverse Vandermonde
matrices.  The su(2) finite oscillator is built in; any model with simple
position and momentum spectra can be loaded from JSON.

>>> from discrete_wigner import su2, wigner_matrix
>>> W = wigner_matrix(su2(2), 1)
>>> [str(x) for x in W.entries[1]]
['1/3', '-2/3', '1/3']
"""

from . import canonical, export, linalg, model, scalars, wigner
from .canonical import GridSpec, canonical_wigner, sample_canonical_grid
from .exceptions import (ConditioningError, CostGuardError, DegreeError, DimensionError,
                         ModelError, NormalizationError, RealnessError, SingularityError)
from .export import GridExport
from .model import (HalfInteger, ModelDescriptor, load_model, momentum_wavefunctions,
                    position_wavefunctions, su2)
from .scalars import EXACT, GaussianRational, Surd, float_backend
from .wigner import (cross_wigner, moment_matrix, superposition_wigner, verify_properties,
                     weyl_operator, wigner_matrix)

__version__ = "0.1.0"
