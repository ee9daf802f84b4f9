"""Steinberg Bessel values from the Hecke relations, against the closed forms.

Run: python3 demos/02_bessel_recursion.py
"""

from iwahori_zeta.bessel import certify, closed_form_table, solve_recursion

p, w = 3, -1

# Propagate the thirteen relations from B(1) = 1, B(t_6) = lam on a small grid.
grid = solve_recursion(p, w, 3, 2)
for key in [("binf", -1, 1), ("a0", 0, 0), ("cinf", 1, 1), ("1binf", 2, 0)]:
    print(f"{key}: {grid.values[key]}    via {grid.provenance[key]}")

# The closed forms: a constant per t_i times (-p w)^l p^(-4(l+m)).
for m in (0, 1):
    print(f"m={m}, l=2:", {i: str(v) for i, v in closed_form_table(p, w, 2, m).items()})

for p_ in (3, 5):
    for w_ in (1, -1):
        print(f"certify p={p_} w={w_}: {certify(p_, w_, 5, 5).status}")
