"""Select the kernel implementation at import time.

The compiled extension is used when it imports cleanly, unless the
environment variable ``KCYCLE_PURE_PYTHON`` is set to a non-empty value other
than ``0``.
"""

from __future__ import annotations

import logging
import os

from kcycle import _pycore

log = logging.getLogger(__name__)


def _load():
    if os.environ.get("KCYCLE_PURE_PYTHON", "") not in ("", "0"):
        return _pycore
    try:
        from kcycle import _core
    except ImportError as exc:  # extension not built
        log.debug("compiled core unavailable (%s); using pure Python", exc)
        return _pycore
    return _core


core = _load()
pure = _pycore

try:
    from kcycle import _core as compiled
except ImportError:
    compiled = None

NAME: str = core.NAME
