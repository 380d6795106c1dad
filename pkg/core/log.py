from __future__ import annotations

import logging
import sys

_HANDLER: logging.StreamHandler | None = None


def setup_logging(verbose: bool = True) -> None:
    """Send log records to stderr. INFO when verbose, WARNING otherwise."""
    global _HANDLER
    root = logging.getLogger()
    if _HANDLER is None:
        _HANDLER = logging.StreamHandler(sys.stderr)
        _HANDLER.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(_HANDLER)
    else:
        # sys.stderr may have been replaced since the first call
        _HANDLER.setStream(sys.stderr)
    root.setLevel(logging.INFO if verbose else logging.WARNING)


def banner(logger: logging.Logger, text: str) -> None:
    logger.info(f"=== {text} ===")
