"""Independent reference values, computed with sympy/mpmath rather than the package.

Run once; the printed values are frozen into tests/oracle_values.py.
"""

import sympy as sp
from mpmath import mp, mpf, sqrt, e

z = sp.symbols("z")
q = 1 / (1 - z)
rhs_f = (sp.Rational(1, 2) * z**2 + sp.Rational(1, 2) * (q**2 - 1) * z
         + sp.Rational(3, 2) * q**2 * (z / (1 - z)) * (q**2 - 1) * z
         + q**4 * (q**2 - 1) * z**2 + sp.Rational(1, 4) * q**2 * (q**2 - 1)**2 * z**2)
phi = sp.cancel(sp.together(z / (z - rhs_f)))
num, den = sp.fraction(phi)
num, den = sp.Poly(num, z, domain="QQ"), sp.Poly(den, z, domain="QQ")
print("phi num", num.all_coeffs()[::-1], flush=True)
print("phi den", den.all_coeffs()[::-1], flush=True)

N = 14


def trunc(p, n):
    return sp.Poly(sum(p.coeff_monomial(z**k) * z**k for k in range(n + 1)), z, domain="QQ")


# phi as a power series: solve den * s = num coefficient by coefficient
d = [den.coeff_monomial(z**k) for k in range(N + 1)]
nn = [num.coeff_monomial(z**k) for k in range(N + 1)]
s = []
for k in range(N + 1):
    s.append((nn[k] - sum(d[j] * s[k - j] for j in range(1, k + 1))) / d[0])
print("phi series", s[:6], flush=True)
ser = sp.Poly(sum(c * z**k for k, c in enumerate(s)), z, domain="QQ")
counts = []
power = sp.Poly(1, z, domain="QQ")
for n in range(1, N + 1):
    power = trunc(power * ser, N)
    counts.append(sp.factorial(n) * power.coeff_monomial(z**(n - 1)) / n)
print("counts", counts, flush=True)

mp.dps = 50
f = sp.lambdify(z, phi, "mpmath")
char_num = sp.Poly(sp.numer(sp.together(phi - z * sp.diff(phi, z))), z)
d2 = sp.lambdify(z, sp.diff(phi, z, 2), "mpmath")
roots = char_num.sqf_part().nroots(n=45, maxsteps=500)
tau = mpf(str(min(r for r in roots if r.is_real and r > 0)))
rho = tau / f(tau)
print("tau", mp.nstr(tau, 35))
print("rho", mp.nstr(rho, 35))
print("gamma", mp.nstr(1 / (rho * e), 35))
print("c", mp.nstr(sqrt(f(tau) / d2(tau)), 35))
den_roots = den.sqf_part().nroots(n=45, maxsteps=500)
print("R", min(r for r in den_roots if r.is_real and r > 0))
print("catalan gamma", mp.nstr(4 / e, 35))
