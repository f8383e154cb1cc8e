"""Point-count statistics of smooth plane curves over small finite fields.

The package enumerates or samples degree-d plane curves, decides
smoothness over the algebraic closure exactly, counts rational points,
and compares the resulting histograms against an exact binomial model —
with closed-form densities where a sieve argument makes them exact and
tail bounds where it does not.
"""

__version__ = "0.1.0"

# Tag for the candidate/point enumeration conventions baked into reports;
# bump only if the odometer or point order ever changes (it should not).
ORDER_TAG = "grlex-desc-v1"

from .gf import FieldSizeError, make_field, parse_field_spec  # noqa: E402,F401
from .poly import TernaryForm, monomial_count  # noqa: E402,F401
from .plane import ProjPoint, closed_point_count, enumerate_p2, genus, point_count  # noqa: E402,F401
from .smooth import SmoothnessVerdict, is_singular_at, is_smooth, singular_scan_oracle  # noqa: E402,F401
