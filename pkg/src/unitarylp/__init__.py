"""Linear programming upper bounds for unitary space-time codes.

Subpackages split along the pipeline: exact combinatorics (partitions,
sympoly, zonal), closed-form bounds (analytic), and the numerical
optimizer (simplex, lp) driven by the command line front end (cli).
"""

__version__ = "0.1.0"
