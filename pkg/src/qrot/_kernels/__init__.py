"""Hot-kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure numpy
implementation when the extension was not built.
"""

from qrot._kernels import _purecore as pure_backend

try:
    from qrot._kernels import _fastcore as _impl
    HAVE_COMPILED = True
except ImportError:
    _impl = pure_backend
    HAVE_COMPILED = False

BACKEND_NAME = "compiled" if HAVE_COMPILED else "pure"

fisher_yates_partial = _impl.fisher_yates_partial
bp_decode = _impl.bp_decode
