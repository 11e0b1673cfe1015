"""xy-disentangler - exact disentangling circuits for the XY spin chain."""

__version__ = "0.1.0"
__description__ = "Exact disentangling circuits for the XY spin chain"
