"""hydrokite: design, simulation, and co-optimization of tethered underwater energy kites."""

__version__ = "0.1.0"
