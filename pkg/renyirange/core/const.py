"""Constants for entropy evaluation."""
from __future__ import annotations

# use the Shannon formula for |alpha - 1| below this bound
SHANNON_SWITCH = 1e-7

# probability vectors summing to 1 within this tolerance are kept as given
NORMALIZATION_TOLERANCE = 1e-12

# larger deviations up to this slack are rescaled, beyond it they are rejected
NORMALIZATION_SLACK = 1e-9

INFINITY_TOKENS = frozenset({"inf", "+inf", "infinity", "∞"})

# orientation_sign: relative disagreement allowed between the direct and the
# factored determinant, and between supplied and recomputed power sums
DETERMINANT_RTOL = 1e-8
DENOMINATOR_RTOL = 1e-9

# relative tolerance of the scale-relative zero test for determinants
DETERMINANT_ZERO_RTOL = 1e-12
