"""Numerical laboratory for a Swanson-type non-self-adjoint oscillator.

Subpackages: linalg (dense kernels), oscillator (truncated matrices and
ladder algebra), waveform (polynomial-times-Gaussian eigenfunctions and
inner products), spectral (pseudospectra, numerical range, accretivity),
physics (compressed pseudo-Hermitian model and dynamics), verify
(cross-check report), cli (command-line front end).
"""

__version__ = "0.1.0"

from .linalg import OperatorMatrix, SpectralDecomposition
from .oscillator import ModelConfig
from .waveform import HermiteGaussian
from ._sigma import active_backend

__all__ = [
    "__version__",
    "OperatorMatrix",
    "SpectralDecomposition",
    "ModelConfig",
    "HermiteGaussian",
    "active_backend",
]
