"""Constants for the information diagram solvers."""
from __future__ import annotations

import math

# halvings per bisection; 2**-60 is below the float spacing of [0, 1]
BISECTION_ITERATIONS = 60

# allowed drop of a monotone function between bisection brackets (nats)
MONOTONE_SLACK = 1e-12

# knots scanned across the outer bisection interval before bisecting
OUTER_SCAN_POINTS = 5

# entropies within this distance of log k are treated as the uniform point U_k
SNAP_TOLERANCE = 1e-12

# slack when checking that an entropy lies within an attainable interval
RANGE_TOLERANCE = 1e-12

# slack when checking that (h1, h2) lies in the two-order joint range
JOINT_RANGE_TOLERANCE = 1e-9

# residual accepted for a preimage found by 2D inversion
INVERSION_TOLERANCE = 1e-9

# supports must stay exactly representable as floats
MAX_ENTROPY = 53 * math.log(2.0)

# doubling limit when searching the alphabet size of an unbounded lower cell
MAX_SUPPORT_DOUBLINGS = 52
