"""Exact symbolic verification engine for path geometries."""
