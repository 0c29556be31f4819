"""Exploration around PSU(3), where the invariant ring is not polynomial.

1. Invariant p-forms versus the image of forms on Z[Z1,Z2,Z3]/(g), per box radius.
2. The weight-12 comparison of Omega^3_B with the torsion of Omega^2_B, over Z
   and after inverting 3.

    python scripts/explore_psu3_forms.py --max-radius 6
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from repdiff.descent import compare_jstar_image
from repdiff.lattice import AbelianInvariants, cokernel_invariants
from repdiff.modules import graded_piece, omega, torsion_graded
from repdiff.poly import hypersurface_ring
from repdiff.weyl import WeightBox, weyl_psu3


@dataclass(frozen=True)
class ExploreConfig:
    max_radius: int = 6
    max_degree: int = 14


def descent_table(cfg: ExploreConfig) -> None:
    action, *gens = weyl_psu3()
    print("radius  p  inv_rank  image_rank  inv<=image  image<=inv")
    for radius in range(1, cfg.max_radius + 1):
        box = WeightBox.interior(action, radius)
        for p in range(3):
            r = compare_jstar_image(action, gens, p, box)
            print(f"{radius:6d}  {p}  {r.invariant_rank:8d}  {r.image_rank:10d}  {str(r.invariants_in_image):10}  {r.image_in_invariants}")


def _invert_3(inv: AbelianInvariants) -> AbelianInvariants:
    torsion = []
    for t in inv.torsion:
        while t % 3 == 0:
            t //= 3
        if t > 1:
            torsion.append(t)
    return AbelianInvariants(inv.free_rank, tuple(torsion))


def torsion_table(cfg: ExploreConfig) -> None:
    B = hypersurface_ring()
    O2, O3 = omega(B, 2), omega(B, 3)
    print("\nweight  Omega2      T(Omega2)  Omega3   match_Z  match_Z[1/3]")
    for d in range(cfg.max_degree + 1):
        o2 = graded_piece(O2, d).invariants
        t = torsion_graded(O2, d).invariants
        o3 = graded_piece(O3, d).invariants
        if o2.is_trivial and o3.is_trivial:
            continue
        print(f"{d:6d}  {str(o2):10}  {str(t):9}  {str(o3):7}  {str(t == o3):7}  {_invert_3(t) == _invert_3(o3)}")
    # Omega^2_12 is free abelian, so no subgroup of it is Z/3
    R = O2.relation_matrix(12)
    print("\nOmega2 weight-12 relation matrix:", R.shape, "cokernel:", cokernel_invariants(R))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-radius", type=int, default=ExploreConfig.max_radius)
    p.add_argument("--max-degree", type=int, default=ExploreConfig.max_degree)
    a = p.parse_args()
    cfg = ExploreConfig(a.max_radius, a.max_degree)
    descent_table(cfg)
    torsion_table(cfg)


if __name__ == "__main__":
    main()
