"""HTTP facade over the core package: pydantic schemas, pure ops, app factory."""

from .app import create_app

__all__ = ["create_app"]
