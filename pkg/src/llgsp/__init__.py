"""Structure-preserving integrators for the Landau-Lifshitz-Gilbert equation."""

__version__ = "0.1.0"
