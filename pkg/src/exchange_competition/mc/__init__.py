"""Classical Metropolis spin simulation with a compiled sweep kernel.

The hot inner loop (one Metropolis sweep) exists twice: a Cython
extension (``_kernels_c``) and a pure-Python fallback (``_kernels_py``)
implementing the identical documented update sequence, selected at
import.  ``KERNEL_BACKEND`` records which one is active.
"""

try:
    from . import _kernels_c as kernels

    KERNEL_BACKEND = "cython"
except ImportError:  # extension not built; fall back to pure Python
    from . import _kernels_py as kernels

    KERNEL_BACKEND = "python"

from .core import (  # noqa: E402
    RunResult,
    Schedule,
    SpinConfig,
    anneal,
    energy,
    metropolis_sweep,
    observables,
    random_config,
)

__all__ = [
    "KERNEL_BACKEND",
    "kernels",
    "SpinConfig",
    "Schedule",
    "RunResult",
    "energy",
    "random_config",
    "metropolis_sweep",
    "anneal",
    "observables",
]
