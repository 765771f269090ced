"""Logging setup for command-line runs."""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(verbose: bool = False) -> None:
    """Install a single stream handler on the package logger.

    Args:
        verbose: Emit DEBUG records when true, otherwise WARNING and above
    """
    package_logger = logging.getLogger("maslov_count")
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    if not package_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        package_logger.addHandler(handler)
