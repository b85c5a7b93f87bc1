#!/usr/bin/env python3
"""
VarDT - Root Level Entry Point

A thin wrapper around the ``vardt`` package so the toolkit runs straight
from a checkout:

    python localize.py localize program.mini tests.mini
"""

from vardt.cli import app

__all__ = ['app']

if __name__ == "__main__":
    app()
