"""
Boundary evaluation is multiplicative but unbounded
===================================================

f -> f(c) with |c| = 1 respects products of polynomials, yet its symbol is
a unimodular constant, so it is not a composition operator. Partial sums
of log 1/(1 - conj(c) z) stay bounded in H^2 while their values at c grow
like log n; odd partial sums do the same in the Bloch space.
"""
import math

from discops import BoundaryEval, almost_mult_residual, is_self_map, symbol_of
from discops.operators import divergence_demo_bloch, divergence_demo_hardy

c = complex(math.cos(0.9), math.sin(0.9))
T = BoundaryEval(c)
print("sup-norm multiplicative residual:", almost_mult_residual(T, "sup", trials=50).max_residual)
print("symbol classified as:", is_self_map(symbol_of(T)).kind.value)

print("\n   n   ||f_n||_H2   |f_n(c)|    ln n + gamma")
for row in divergence_demo_hardy(c, 1000, ns=[1, 10, 100, 1000]):
    print(f"{row.n:4d}   {row.h2_norm:.8f}   {row.value_at_c:.6f}   {math.log(row.n) + 0.5772156649:.6f}")

print("\n   n   ||p_n||_Bloch   |p_n(c)|")
for row in divergence_demo_bloch(c, 200, ns=[1, 10, 50, 200]):
    print(f"{row.n:4d}   {row.bloch_norm:.10f}    {row.value_at_c:.6f}")
