#!/usr/bin/env python3
"""
Shared fixtures for the VarDT test suite.
"""

import os
import sys

import pytest

# Run straight from a checkout
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from vardt.evalkit.corpus import find_bug  # noqa: E402


@pytest.fixture(scope="session")
def lang27():
    return find_bug("lang27")


@pytest.fixture
def write_file(tmp_path):
    """Write ``text`` under the test's temporary directory and return the path."""
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
