"""The unit-criterion verdict on a synthetic instance, exact mode.

A self-consistent instance is manufactured backwards: random heights and a
random realizable pairing table assemble regulator components, and the
analytic leading terms are set to psi(u) times the component for a known
group-ring unit u.  The verdict must be PASS with witness exactly u, and
scaling the analytic side by p must flip it to FAIL with every coefficient
valuation raised by one.
"""

import random
from fractions import Fraction

from mtreg.bockstein import pairing_from_lambda, random_phi
from mtreg.groupring import Character, GroupData, GroupRingElem, apply_character, is_unit_zp
from mtreg.regulator import (
    AnalyticInput,
    HeightMatrix,
    assemble_regulator,
    solve_psi,
    verify_theorem_main,
)
from mtreg.structure import PointsStructure

rng = random.Random(11)
group = GroupData(3, 2)
structure = PointsStructure(group, (1, 1, 1))
print("== synthetic verification instance, m =", structure.m, "==")

raw = [
    [[Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(group.order)]
     for _ in range(structure.total)]
    for _ in range(structure.total)
]
heights = HeightMatrix.from_raw(structure, raw, mode="exact")
table = pairing_from_lambda(random_phi(structure, group.n + 6, rng).inverse())
psi_matrix = solve_psi(table)
components, sign = assemble_regulator(heights, psi_matrix)
print("regulator components assembled; global sign:", sign)

while True:
    u = GroupRingElem(group, [rng.randint(-5, 5) for _ in range(group.order)])
    if is_unit_zp(u):
        break
print("hidden unit u:", list(u.coeffs))

values = {a: apply_character(u, Character(group, a)) * components[a] for a in range(group.order)}
analytic = AnalyticInput(group, values, "exact").validate()

report = verify_theorem_main(analytic, components, structure)
print("\nverdict:", report["verdict"])
print("recovered witness:", report["witness_coeffs"])

scaled = AnalyticInput(group, {a: v * 3 for a, v in values.items()}, "exact")
report3 = verify_theorem_main(scaled, components, structure)
print("\nafter scaling the analytic side by p = 3:")
print("verdict:", report3["verdict"], " valuations:", report3["valuations"])
