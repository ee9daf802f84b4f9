"""Iwahori cosets of GSp(4) and the volumes of the cells R h(l,m) t I_p.

Run: python3 demos/01_cosets_and_volumes.py
"""

from iwahori_zeta.cosets import build_reps, expected_size, verify_completeness, \
    verify_distinct_cosets
from iwahori_zeta.volumes import assembled_volume, compute_At_Ht_by_enumeration, volume

p = 3

# 1. The representative set S has (p+1)^2 (p^2+1) elements, one per coset.
reps = build_reps(p)
print(f"|S| = {len(reps)} (formula {expected_size(p)})")
r = verify_completeness(p)
print(f"|GSp4(F_p)| / |B(F_p)| = {r.params['group_order']} / {r.params['borel_order']}"
      f" -> {r.status}")
r = verify_distinct_cosets(p)
print(f"{r.params['pairs']} pairs, distinct Iwahori cosets -> {r.status}")

# 2. Indices A_t and subgroups H_t by counting over F_p.
prof = compute_At_Ht_by_enumeration(p)
for i in range(1, 9):
    print(f"t_{i}: A_t = {prof.A[i]}, H_t = {prof.tag[i]}")

# 3. Volumes: table against the product route.  They differ at t_6 for m > 0.
for l, m in ((0, 0), (1, 0), (0, 1), (2, 2)):
    cells = [1, 2, 5, 7] if m == 0 else range(1, 9)
    for i in cells:
        table, product = volume(l, m, i, p), assembled_volume(l, m, i, p)
        flag = "" if table == product else f"   <- product route {product}"
        print(f"I(l={l}, m={m}, t_{i}) = {table}{flag}")
