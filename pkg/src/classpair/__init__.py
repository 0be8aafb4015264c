"""classpair: ideal class pairings on elliptic curve twists.

Builds discriminant -D binary quadratic forms by pairing rational points
on a rank-r curve E with a small twist point, evaluates the resulting
effective class number lower bounds, and scans -d t^2 = m^3 - a n^6 for
twist discriminants admitting suitable points.
"""

__version__ = "0.1.0"

from .arith import (
    EisensteinInt,
    cubic_character,
    cubic_residue_symbol,
    is_fundamental_discriminant,
    is_squarefree,
    kronecker_symbol,
    mobius,
    squarefree_divisor_count,
)
from .curve import (
    CurveQ,
    RationalPoint,
    TwistPoint,
    add_points,
    count_points_mod_p,
    curve_from_string,
    mordell_curve,
    normalize_twist_point,
    point_from_string,
    torsion_subgroup_order,
    twist_point_on_curve,
)
from .forms import QuadForm, all_reduced_forms, class_number, equivalent, reduce_form
from .heights import (
    HeightValue,
    bounded_height_points,
    canonical_height,
    canonical_height_doubling,
    curve_offset,
    diameter,
    height_pairing,
    regulator,
    weil_height,
)
from .bounds import (
    BoundReport,
    CurveProfile,
    asymptotic_lower_bound,
    class_number_lower_bound,
    goldfeld_gross_zagier_bound,
    is_suitable,
    leading_constant,
    profile_curve,
    unit_ball_volume,
)
from .pairing import PairingInput, PairingOutput, pair, pair_batch
from .scan import (
    ScanConfig,
    ScanRecord,
    parity_sign,
    root_count_brute,
    root_count_closed,
    scan,
    stewart_top_coefficient,
    summatory_count,
)
