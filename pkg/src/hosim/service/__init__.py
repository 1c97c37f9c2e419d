"""HTTP service wrapping the detection library: load graphs once, keep the
diffusion caches warm, and answer detection/evaluation queries."""

from .app import create_app

__all__ = ["create_app"]
