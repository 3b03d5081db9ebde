"""
Physical constants, fixed at CODATA 2018 values.

Every derived number in the package reads its constants from here so that
results do not drift with the installed scipy release.
"""

HBAR = 1.054571817e-34  # J s
EPSILON_0 = 8.8541878128e-12  # F / m
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C

YB171_MASS_U = 171.0
