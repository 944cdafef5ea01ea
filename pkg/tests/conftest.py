from __future__ import annotations

import pytest

from parm import load_fig1, parse_pattern


@pytest.fixture(scope="session")
def fig1():
    return load_fig1()


@pytest.fixture
def pat(fig1):
    """Parse a pattern written with the fixture's attribute and label names."""
    return lambda text: parse_pattern(text, fig1)


def vid(g, *names):
    return sorted(g.vertex_id(n) for n in names)
