"""Kernel selection: compiled extension when available, else pure Python.

Set ADICLAB_PURE_PYTHON=1 to force the fallback (used by the benchmark).
"""

import os

if os.environ.get("ADICLAB_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION

min_path = _impl.min_path
advance_path = _impl.advance_path
column_coding = _impl.column_coding


def implementations():
    """All available kernel modules, for tests and benchmarks."""
    from . import _pykernels

    mods = [_pykernels]
    try:
        from . import _ckernels

        mods.append(_ckernels)
    except ImportError:
        pass
    return mods
