"""Physical constants in CGS units.

The whole package works in CGS (cm, g, s, erg) with hbar carried
explicitly, so gram-scale classicality estimates come out directly
in laboratory numbers.
"""

# Reduced Planck constant [erg s] (CODATA 2018 exact value)
HBAR = 1.054571817e-27

# Bohr radius [cm]
BOHR_RADIUS = 5.29177210903e-9

# Julian year [s]
SECONDS_PER_YEAR = 365.25 * 86400.0

# Common laboratory HeNe laser line [cm]
HENE_WAVELENGTH = 632.8e-7

# One hour [s]
HOUR = 3600.0
