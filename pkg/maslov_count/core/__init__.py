"""Core configuration and utilities.

This module provides:
- Settings: Numeric defaults loaded from environment variables (.env, MASLOV_ prefix)
- get_settings(): Cached settings instance
- configure_logging(): Package log handler for command-line runs
- errors: The MaslovCountError hierarchy with stable error codes

See ARCHITECTURE.md for detailed module descriptions.
"""

from maslov_count.core.config import Settings, get_settings
from maslov_count.core.logging_setup import configure_logging

__all__ = ["Settings", "get_settings", "configure_logging"]
