"""HTTP service layer: pydantic schemas plus the FastAPI app."""

from .app import app

__all__ = ["app"]
