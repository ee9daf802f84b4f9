"""Summing W * B * I over all cells and comparing with the stated L-factors.

Run: python3 demos/03_zeta_identities.py
"""

from iwahori_zeta.zeta import assemble, cancellation_ledger, theorem_rhs, verify_theorem

p = 3
for case in ("st-st", "st-unram", "unram-st"):
    rhs = theorem_rhs(case, p)
    asm = assemble(case, p, order=12)
    print(rhs)
    print("  closed form equal:", asm.closed == rhs.ratfn)
    print("  series to T^6:", [str(c) for c in asm.series.coeffs[:7]])

# Where cells cancel rather than sum: case 1 over all of T_m, case 3 in the pair t_3, t_5.
for case in ("unram-st", "st-unram"):
    ledger = cancellation_ledger(case, p, l_max=4, m_max=4)
    print(case, "m > 0 ledger all zero:", all(v.is_zero() for v in ledger.values()))

r = verify_theorem("st-st", 5, a_p=-1, w_p=1, order=40)
print("st-st p=5 a=-1 w=1, order 40:", r.status)
