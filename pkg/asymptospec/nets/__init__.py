"""ε-parametrized nets of smooth functions, their algebra and seminorms."""
# Default ε-ladder: eps0 * q**i for i < count
DEFAULT_EPS0 = 2.0**-4
DEFAULT_Q = 2.0**-1
DEFAULT_COUNT = 13

# Finite-difference step as a fraction of ε
FD_STEP_RATIO = 1.0/64

# Global sampling lattice and refinement near registered features
LATTICE_SPACING = 2.0**-8
REFINE_DIVISOR = 8
REFINE_REACH = 32
