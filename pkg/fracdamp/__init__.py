"""Linear fractionally damped oscillator solver."""

__version__ = "0.1.0"
