"""
Folner boxes and tilings
========================

The boxes ``Phi_N`` (the first N coordinates of every block) are nearly
invariant, and a bigger box splits exactly into translates of a smaller
one.  A tile occupies exactly ``p^-N`` of any window it tiles.
"""

from ffrigidity.dualgroup import GroupElt
from ffrigidity.folner import (
    FiniteSubset,
    box,
    box_tile_shifts,
    greedy_tiling_cover,
    invariance_defect,
    tile_density_check,
    verify_tiling,
    z_interval,
    z_invariance_defect,
)

P = (3,)
for N in range(1, 5):
    K = FiniteSubset([GroupElt({(0, 3): 1}, P)])
    print(f"|Phi_{N}| = {len(box(N, P)):3d}, defect against e_3: {invariance_defect(K, box(N, P))}")

shifts = box_tile_shifts(2, 4, P)
print("Phi_4 from", len(shifts), "translates of Phi_2:", verify_tiling(box(2, P), shifts, box(4, P)))
print("density:", tile_density_check(2, 4, P).density)

# A tile that does not divide the box leaves something uncovered.
tile = FiniteSubset([GroupElt.zero((2,)), GroupElt({(0, 1): 1}, (2,)), GroupElt({(0, 2): 1}, (2,))])
_, leftover, history = greedy_tiling_cover(tile, box(3))
print("greedy uncovered fractions:", [str(h) for h in history], "final:", leftover)

# Integer intervals [0, 2^N): the defect against a unit shift is 2^(1-N).
print("Z intervals:", [str(z_invariance_defect({1}, z_interval(n))) for n in (1, 2, 3, 4)])
