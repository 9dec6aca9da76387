"""Group rings of a cyclic 3-group: projections, Fourier inversion, the
p-adic unit criterion and augmentation-ideal membership."""

from mtreg import (
    GroupData,
    GroupRingElem,
    apply_character,
    fourier_invert,
    ideal_membership,
    is_unit_zp,
    project_rho,
)

G = GroupData(3, 2)
print("== Z[G] for G cyclic of order", G.order, "==")

x = GroupRingElem.from_dict(G, {0: 2, 1: 1, 4: 1, 7: -3})
print("x =", list(x.coeffs))
print("projection to Gamma_1:", list(project_rho(x, 1).coeffs))
print("augmentation (projection to Gamma_0):", list(project_rho(x, 0).coeffs))

print("\ncharacter values (exact cyclotomic numbers):")
for psi in G.characters()[:3]:
    val = apply_character(x, psi)
    print(f"  psi_{psi.a} (kernel level {psi.t}):", [str(c) for c in val.coeffs])

print("\nFourier inversion recovers x from its character values:")
values = {psi: apply_character(x, psi) for psi in G.characters()}
back = fourier_invert(values, G)
print("  roundtrip equal:", tuple(int(c) for c in back.coeffs) == x.coeffs)

print("\nunit criterion in Z_3[G] (augmentation coprime to 3):")
for coeffs in ([2, 3, 3, 0, 0, 0, 0, 0, 0], [1, -1, 0, 0, 0, 0, 0, 0, 0]):
    elem = GroupRingElem(G, coeffs)
    print(f"  {coeffs[:3]}...: unit = {is_unit_zp(elem)}")

print("\naugmentation-ideal membership at level 1:")
gen = GroupRingElem.sigma_power(G, 3) - GroupRingElem.one(G)
print("  sigma^3 - 1 in the ideal:", ideal_membership(gen, 1))
print("  1 in the ideal:", ideal_membership(GroupRingElem.one(G), 1))
