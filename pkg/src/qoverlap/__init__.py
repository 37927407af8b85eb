"""Bosonic-interference overlap estimation: chip simulator, estimators and QML routines."""

__version__ = "0.1.0"
