"""Tame Hilbert symbols at a place of residue characteristic 7 (p = 3).

Classes of the local multiplicative group mod cubes are pairs
(valuation mod 3, residue-unit exponent mod 3); the full 9 x 9 symbol
table shows bilinearity, the vanishing on unit pairs and non-degeneracy.
"""

from mtreg.ffec import CurveFq, Fq
from mtreg.localpair import LocalKummerElem, LocalPlace, LocalUnitClass, local_tate, tame_hilbert

field = Fq(7)
curve = CurveFq(field, field.elem(0), field.elem(2))
place = LocalPlace.create("w7", 3, curve)
print("== place of residue characteristic 7, zeta_res =", place.basis.zeta_res, "==\n")

classes = [LocalUnitClass(3, v, u) for v in range(3) for u in range(3)]
header = "        " + "  ".join(f"({b.v},{b.u_exp})" for b in classes)
print("symbol table {a, b} as exponents of zeta_res (rows a, cols b):")
print(header)
for a in classes:
    row = "  ".join(f"  {tame_hilbert(a, b, place)}  " for b in classes)
    print(f"({a.v},{a.u_exp})  {row}")

print("\nunit-unit pairs all vanish (top-left 3 x 3 block).")

a_elem = LocalKummerElem.of({"S": place.uniformizer_class(), "T": LocalUnitClass(3, 0, 0)})
b_elem = LocalKummerElem.of(
    {"S": LocalUnitClass(3, 0, 0), "T": place.unit_class_of(field.elem(3))}
)
print("\nlocal duality pairing of two Kummer-type elements:",
      local_tate(a_elem, b_elem, place))
