"""
Commutators and the div-curl pairing
====================================

For divergence-free E and B = (R_j phi)_j, the product E.B paired with b
equals a sum of commutator terms ``<[b, R_j] E_j, phi>``. This script checks
that identity, the matrix version with iterated commutators, and the
component formula for ``[b, P]``.
"""

import numpy as np

from divcurl import (ExperimentConfig, SymbolFunction, check_decomposition_2p,
                     check_pairing_identity)
from divcurl.commutators import commutator_projection_paths
from divcurl.harness import build_e1, build_e2
from divcurl.random_fields import random_power_law_field

rng = np.random.default_rng(2)

one = ExperimentConfig(experiment="E1", n=2, nx=16)
data = build_e1(one, rng)
b = SymbolFunction.normalized(random_power_law_field(one.grid(), rng, 1.0))
print("one-parameter pairing residual:", check_pairing_identity(data["E"], data["B"], data["phi"], b))
_, _, gap = commutator_projection_paths(b, data["E"])
print("[b,P] direct vs component formula:", gap)

two = ExperimentConfig(experiment="E2", n=2, m=2, nx=8, ny=8)
data = build_e2(two, rng)
print("decomposition residuals:", check_decomposition_2p(data["E"], data["B"], data["phi"]))
b = SymbolFunction.normalized(random_power_law_field(two.grid(), rng, 1.0, ("x", "y")), "bmo_product")
print("iterated commutator pairing residual:",
      check_pairing_identity(data["E"], data["B"], data["phi"], b))
