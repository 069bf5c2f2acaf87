"""
Which composition operators respect the Duhamel product?
========================================================

Pointwise multiplicativity holds for every composition operator. Under the
Duhamel product only the maps phi(z) = a z survive; z^2 already fails on
the pair (z, z).
"""
import numpy as np

from discops import Composition, almost_mult_residual, classify_duhamel_multiplicative, duhamel_residual
from discops.operators import random_self_map
from discops.series import TruncatedSeries, identity, monomial

for name, phi in [
    ("0.5 z", identity() * 0.5),
    ("z^2", monomial(2)),
    ("0.2 + 0.5 z", TruncatedSeries([0.2, 0.5])),
    ("random", random_self_map(3)),
]:
    pointwise = almost_mult_residual(Composition(phi), "hardy:p=2", trials=20).max_residual
    r = duhamel_residual(phi)
    verdict = classify_duhamel_multiplicative(phi)
    print(f"{name:12s} pointwise {pointwise:.1e}  Duhamel {r.max_residual:.3e} "
          f"witness z^{r.witness[0]}, z^{r.witness[1]}  -> {verdict.explanation}")

# the residual grows with the constant term
for b in np.linspace(0.0, 0.4, 5):
    r = duhamel_residual(TruncatedSeries([b, 0.5]), pairs=[(1, 1)])
    print(f"phi(0) = {b:.1f}: residual on (z, z) = {r.max_residual:.4f}")
