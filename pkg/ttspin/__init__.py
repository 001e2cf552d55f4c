"""ttspin - tensor-train assembly and frequency-domain solution of NMR spin systems."""

__version__ = "0.1.0"
__all__ = ["__version__"]
