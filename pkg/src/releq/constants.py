"""Physical constants (SI units, CODATA 2018 rounded to six significant digits)."""

HBAR = 1.05457e-34  # J s
K_B = 1.38065e-23  # J / K
C_LIGHT = 2.99792e8  # m / s
M_PROTON = 1.67262e-27  # kg
