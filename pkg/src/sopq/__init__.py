"""Exact models and component atlas for SO(p,q)-Higgs bundles on hyperelliptic curves."""

__version__ = "0.1.0"
