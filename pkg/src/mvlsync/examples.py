"""Bundled example networks."""

from importlib import resources

from .dsl import parse_network

NAMES = ("example1", "example2", "example3", "example4")


def example_source(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    return resources.files("mvlsync").joinpath("data", f"{name}.mvln").read_text(encoding="utf-8")


def load_example(name: str):
    """Parsed :class:`~mvlsync.network.Network` for a bundled example."""
    return parse_network(example_source(name))
