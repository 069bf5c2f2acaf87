"""
Norms on disc function spaces
=============================

Each norm is computed by quadrature or sup search and compared with the
closed form available for monomials.
"""
from discops import SpaceSpec, monomial, monomial_norm_closed_form, norm, random_series

spaces = ["hardy:p=4", "bergman:p=2,a=0", "bergman:p=4,a=-0.5", "besov:p=3", "bloch"]
print(f"{'space':22s} {'n':>3s} {'numeric':>14s} {'closed form':>14s}")
for text in spaces:
    spec = SpaceSpec.parse(text)
    for n in (1, 5, 20):
        got = norm(monomial(n, 64), spec).value
        if spec.kind == "bloch":
            # sup of (1 - r^2) n r^(n-1), attained at r^2 = (n-1)/(n+1)
            want = 1.0 if n == 1 else 2 * n / (n + 1) * ((n - 1) / (n + 1)) ** ((n - 1) / 2)
        else:
            want = monomial_norm_closed_form(spec, n)
        print(f"{text:22s} {n:3d} {got:14.10f} {want:14.10f}")

# a generic function: the method and error estimate travel with the value
f = random_series(7, 40, rho=0.85)
for text in ["hardy:p=2", "sup", "bloch", "little-bloch"]:
    r = norm(f, SpaceSpec.parse(text))
    print(f"{text:14s} {r.value:.12f}  ({r.method}, err ~ {r.error_estimate:.1e})")
