"""taylorlab: a spectral laboratory for the linearized Taylor dynamics on the torus."""

__version__ = "0.1.0"
