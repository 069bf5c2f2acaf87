"""
Truncated series and the Duhamel product
========================================

Series live on the disc as coefficient vectors mod z^(N+1). The Duhamel
product weights the Cauchy product by 1/binom(k, i); the Borel transform
a_k -> k! a_k turns one into the other.
"""
import numpy as np

from discops import cauchy_mul, duhamel, duhamel_oracle, evaluate, identity, monomial, random_series
from discops.duhamel import borel, inverse_borel

# z (*) z = z^2 / 2 and z^2 (*) z^2 = z^4 / 6
z = identity(8)
print("z (*) z     =", duhamel(z, z))
print("z^2 (*) z^2 =", duhamel(monomial(2, 8), monomial(2, 8)))

# the coefficient rule against the defining integral, at a point inside the disc
f = random_series(1, 6, rho=0.7, degree=16)
g = random_series(2, 6, rho=0.7, degree=16)
w = 0.6 - 0.3j
print("coefficients:", evaluate(duhamel(f, g), w))
print("integral    :", duhamel_oracle(f, g, w))

# Borel: B(f (*) g) = B(f) B(g)
lhs = borel(duhamel(f, g))
rhs = cauchy_mul(borel(f), borel(g))
print("Borel defect:", np.max(np.abs((lhs - rhs).coeffs)))
print("round trip  :", np.max(np.abs((inverse_borel(borel(f)) - f).coeffs)))
