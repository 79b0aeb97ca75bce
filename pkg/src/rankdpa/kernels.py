"""Kernel selection: the compiled extension when it is importable, the
pure-Python implementation otherwise.  Setting ``RANKDPA_PURE_PYTHON=1``
forces the fallback."""
import os

from . import _kernels_py

PurePythonKernel = _kernels_py.RankingKernel

try:
    from ._kernels import RankingKernel as CompiledKernel
except ImportError:  # extension not built
    CompiledKernel = None

if CompiledKernel is not None and not os.environ.get("RANKDPA_PURE_PYTHON"):
    RankingKernel = CompiledKernel
else:
    RankingKernel = PurePythonKernel

COMPILED = RankingKernel is not PurePythonKernel

__all__ = ["RankingKernel", "PurePythonKernel", "CompiledKernel", "COMPILED"]
