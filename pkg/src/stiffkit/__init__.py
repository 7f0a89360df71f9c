"""stiffkit: exact certification of spherical designs, stiff configurations,
and the extrema of pairwise potentials at their dual configurations."""

__version__ = "0.1.0"
