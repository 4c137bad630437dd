"""Eigenvalues and eigenfunctions of a PT-symmetric Hamiltonian.

H = -d^2/dx^2 + V(x) with V = i x^2 for x <= 0 and -i x^2 for x >= 0. The
spectrum is found as the zeros of an entire function built from reciprocal
Gamma factors; a shooting solver provides an independent check and extends
the potential to i(-x)^a, -i x^a.
"""

__version__ = "0.1.0"

from .errors import SpectrumError  # noqa: E402
from .quantization import spectral_fn  # noqa: E402
from .rootfinder import DEFAULT_REGION, Eigenvalue, SearchRegion, count_zeros, find_eigenvalues, newton_refine  # noqa: E402
from .wavefunction import normalize, psi, sample_wave  # noqa: E402
from .oracle import ShootingConfig, scan_exponent, shoot_eigenvalues  # noqa: E402

__all__ = [
    "__version__",
    "SpectrumError",
    "spectral_fn",
    "DEFAULT_REGION",
    "Eigenvalue",
    "SearchRegion",
    "count_zeros",
    "find_eigenvalues",
    "newton_refine",
    "normalize",
    "psi",
    "sample_wave",
    "ShootingConfig",
    "scan_exponent",
    "shoot_eigenvalues",
]
