"""Exact arithmetic in Q(zeta_9): inversion, Galois maps, reconstruction.

Everything here is exact: cyclotomic numbers are vectors of rationals in
the power basis and all identities hold on the nose.
"""

from fractions import Fraction

from mtreg import CycloNum, ComplexApprox, cyclo_invert, galois_map, rational_reconstruct

p, n = 3, 2
zeta = CycloNum.zeta_pow(p, n, 1)
one = CycloNum.one(p, n)

print("== the field Q(zeta_9), power basis of dimension", CycloNum.degree(p, n), "==")
print("zeta      =", [str(c) for c in zeta.coeffs])
print("zeta^9    =", [str(c) for c in (zeta ** 9).coeffs], "(back to 1)")

a = one - zeta
inv = cyclo_invert(a)
print("\n(1 - zeta)^(-1) =", [str(c) for c in inv.coeffs])
print("check: (1 - zeta) * inverse =", (a * inv) == one)

print("\nGalois action zeta -> zeta^k permutes the roots:")
for k in (2, 4, 7):
    img = galois_map(zeta, k)
    print(f"  k={k}: zeta ->", [str(c) for c in img.coeffs])
print("composition: g_2(g_4(zeta)) == g_8(zeta):",
      galois_map(galois_map(zeta, 4), 2) == galois_map(zeta, 8))

print("\n== rational reconstruction from floating data ==")
x = ComplexApprox.of(0.333333333, 0.0, 1e-9)
print("0.333333333 ->", rational_reconstruct(x, 1e-6, 10 ** 6))
value = float(Fraction(-22, 7))
print("-22/7 as float ->", rational_reconstruct(value, 1e-9, 100))

print("\nembedding |zeta|:", f"{zeta.embed(1).magnitude():.12f}", "(should be 1)")
