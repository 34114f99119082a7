"""CSV-to-PNG rendering for the ntruvfk experiment output."""

from .plots import plot_babai_vs_cvp, plot_sweep

__all__ = ["plot_babai_vs_cvp", "plot_sweep"]
