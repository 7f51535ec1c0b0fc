"""Worked examples: delta powers, amplified nets, semilinear transport,
regularized blow-up, strength of singularities and the sum law."""
# Grid used for fiber tables of space-time experiments
DEFAULT_TIMES = (0.25, 0.5, 1.0)
RADIUS_TOLERANCE = 0.15
