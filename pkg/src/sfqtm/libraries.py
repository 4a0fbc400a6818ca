"""Cell libraries shipped with the package."""

from importlib import resources

from .netlist_io import parse_genlib

NAMES = ("mcnc_style", "and2_inv", "and_inv", "nand_nor")


def library_text(name):
    return resources.files("sfqtm").joinpath("data", f"{name}.genlib").read_text()


def load(name, **cells):
    """Parse a bundled library; ``cells`` overrides DFF/splitter parameters."""
    if name not in NAMES:
        raise KeyError(f"unknown library {name!r}; choose from {NAMES}")
    return parse_genlib(library_text(name), **cells)
