"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
numpy reference implementation serves identical results. Set
``C2A2_PURE_PYTHON=1`` to force the fallback (useful for benchmarking and
debugging).
"""

from __future__ import annotations

import os

from c2a2._kernels import pyref

if os.environ.get("C2A2_PURE_PYTHON"):
    impl = pyref
else:
    try:
        from c2a2._kernels import native as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pyref


def backend_name() -> str:
    """Which kernel backend is active: 'native' or 'python'."""
    return impl.NAME


def available_backends():
    """All importable backends, compiled one first."""
    backends = []
    try:
        from c2a2._kernels import native

        backends.append(native)
    except ImportError:
        pass
    backends.append(pyref)
    return backends
