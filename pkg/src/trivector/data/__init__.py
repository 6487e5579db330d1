"""Shipped trivector fixtures and golden files."""

from __future__ import annotations

from importlib import resources

from ..exterior import Multivector, parse_trivector


def fixture_text(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text()


def load_fixture(name: str) -> Multivector:
    return parse_trivector(fixture_text(name))
