"""Asymptotic analysis of generalized nets: valuations, regularity classes,
singular spectra and frequential wave front sets."""
# Operational caps for the "exists N" / "for all m" quantifiers
N_CAP = 64
M_CAP = 16
# Exponent tolerances
UNIFORM_TOL = 0.25
SLOW_SCALE_TOL = 0.1
RADIUS_TOL = 0.15
