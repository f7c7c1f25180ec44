"""Exact computations around rigidity sequences in F_p[t] and related groups.

Submodules: ``ffield`` (F_p and F_p[t]), ``laurent`` (truncated series in
1/t), ``cfrac`` (continued fractions), ``pisot`` (PV elements, plus real
PV numbers), ``dualgroup`` (characters of direct sums of Z/p),
``measures`` and ``construction`` (atomic measures and the certified
refinement), ``folner`` (Folner sets and tilings), ``recurrence``
(finite recurrence and cube checks) and ``cli``.
"""

from .certificate import SCHEMA_VERSION, Certificate, Row
from .cfrac import CFExpansion, Convergents, cf_expand, cf_step, convergents, fibonacci_alpha, verify_approx
from .construction import (
    C0Geometric,
    C0IndexSet,
    ConstructionError,
    ConstructionState,
    FinitelySupported,
    HorizonError,
    PickError,
    cell_mass_check,
    construct_wm_measure,
    geometric_sequence,
    indexset_sequence,
    monomial_sequence,
    reverify,
)
from .dualgroup import Character, GroupElt, RootOfUnity, WindowError, char_eval, poly_pair
from .ffield import AbsValue, Fp, ModulusError, Poly
from .folner import FiniteSubset, box, box_tile_shifts, invariance_defect, self_tiling_cover, tile_density_check
from .laurent import Laurent, PrecisionError, l_floor, l_frac, l_inv
from .measures import AtomicMeasure, convolve, fourier, rigidity_defect, support_group_check
from .pisot import MonicIntPoly, NotPVError, newton_polygon, is_pv, pv_floor_powers, pv_root, real_pv_table
from .recurrence import (
    CubeInstance,
    FiniteModel,
    blowup_lower_bound,
    cube_lemma_check,
    delta_recurrence_bruteforce,
    mcdiarmid_bound,
    r_epsilon_set,
)

__version__ = "0.1.0"
