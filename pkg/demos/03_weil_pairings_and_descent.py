"""Weil pairings and descent evaluation on small curves with full 3-torsion.

The reference curve y^2 = x^3 + 2 over F_7 has exactly nine points, all of
them 3-torsion, so every pairing identity can be checked exhaustively.
"""

from mtreg.ffec import CurveFq, Fq, descent_eval, ec_mul, find_p_torsion_basis, weil_pairing

field = Fq(7)
curve = CurveFq(field, field.elem(0), field.elem(2))
print("== E: y^2 = x^3 + 2 over F_7, order", curve.order(), "==")

basis = find_p_torsion_basis(curve, 3)
print(f"canonical 3-torsion basis: S = ({basis.S.x}, {basis.S.y}),",
      f"T = ({basis.T.x}, {basis.T.y})")
print("zeta_res = e_3(T, S) =", basis.zeta_res)

e = weil_pairing(basis.S, basis.T, 3)
print("\ne(S, T) =", e, " e(T, S) =", weil_pairing(basis.T, basis.S, 3))
print("alternating: e(S, S) =", weil_pairing(basis.S, basis.S, 3))
print("bilinear: e(2S, T) == e(S, T)^2:",
      weil_pairing(ec_mul(basis.S, 2), basis.T, 3) == e * e)

print("\ndescent classes f_S(Q) mod cubes (exponent of zeta_res):")
for q_pt in curve.points():
    if q_pt.is_infinity:
        continue
    cls = descent_eval(curve, basis.S, q_pt, 3, basis.zeta_res)
    print(f"  Q = ({q_pt.x}, {q_pt.y}): class {cls}")
print("note: the subgroup generated by S itself has trivial class, and the")
print("class is constant on cosets, i.e. the map is a homomorphism killing S.")
