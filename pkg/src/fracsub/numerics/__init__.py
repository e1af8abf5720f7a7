"""
Numerical building blocks: special functions, discrete fractional operators,
the aggregated kernel N and the banded linear solvers.
"""

from .special import MLParams, gamma, mittag_leffler, ml1, ml2, omega
from .fracops import (
    CallableKernel,
    GLWeightTable,
    MemoryKernel,
    MemoryQuadrature,
    NodeHistory,
    OmegaKernel,
    PowerKernel,
    ZeroKernel,
    caputo_power,
    discrete_caputo,
    gl_weights,
    kernel_from_name,
    kernel_quadrature,
    memory_term,
    richardson_combine,
)
from .kernels import (
    KernelPreset,
    KernelProfile,
    KernelSpec,
    kernel_n,
    kernel_profile,
    preset_spec,
    sign_change_time,
)
from .linalg import BandedSystem, TridiagonalSystem, solve_banded, solve_tridiagonal

__all__ = [
    'MLParams',
    'gamma',
    'mittag_leffler',
    'ml1',
    'ml2',
    'omega',
    'CallableKernel',
    'GLWeightTable',
    'MemoryKernel',
    'MemoryQuadrature',
    'NodeHistory',
    'OmegaKernel',
    'PowerKernel',
    'ZeroKernel',
    'caputo_power',
    'discrete_caputo',
    'gl_weights',
    'kernel_from_name',
    'kernel_quadrature',
    'memory_term',
    'richardson_combine',
    'KernelPreset',
    'KernelProfile',
    'KernelSpec',
    'kernel_n',
    'kernel_profile',
    'preset_spec',
    'sign_change_time',
    'BandedSystem',
    'TridiagonalSystem',
    'solve_banded',
    'solve_tridiagonal',
]
