"""Select the compiled sparse kernels when built, else the Python ones.

``QHA_KERNELS=python`` forces the Python kernels.
"""
import os

if os.environ.get("QHA_KERNELS") == "python":
    from ._kernels_py import axpy, matvec, reduce_by  # noqa: F401

    BACKEND = "python"
else:
    try:
        from ._ckernels import axpy, matvec, reduce_by  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        from ._kernels_py import axpy, matvec, reduce_by  # noqa: F401

        BACKEND = "python"
