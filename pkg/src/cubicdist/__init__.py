"""Value distribution of cubic Hecke L-functions over the Eisenstein integers."""

__version__ = "0.1.0"
