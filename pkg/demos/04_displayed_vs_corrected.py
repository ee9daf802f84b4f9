"""Where the displayed identities fail, and what the corrected checks find instead.

Run: python3 demos/04_displayed_vs_corrected.py
"""

from iwahori_zeta.bessel import verify_hecke_matrix_identities
from iwahori_zeta.cosets import verify_claim_identities
from iwahori_zeta.quadratic import derive_params
from iwahori_zeta.whittaker import verify_decompositions

p = 3
prm = derive_params(7, p)


def show(label, report):
    bad = report.failures()
    print(f"{label}: {report.effective_status}, {len(bad)} failing checks")
    for f in bad[:2]:
        print("   ", f.check, f.params, str(f.witness)[:160])


show("claims, displayed", verify_claim_identities(p, prm, range(2), range(2), "printed"))
show("claims, corrected", verify_claim_identities(p, prm, range(2), range(2), "corrected"))
show("Hecke identities, displayed",
     verify_hecke_matrix_identities(p, prm, range(2), range(2), mode="printed"))
show("Hecke identities, up to I_p",
     verify_hecke_matrix_identities(p, prm, range(2), range(2), mode="coset"))
for case in ("unram-st", "st-st", "st-unram"):
    show(f"{case} decompositions, displayed",
         verify_decompositions(case, p, prm, range(2), range(2), "printed"))
    show(f"{case} decompositions, recomputed k",
         verify_decompositions(case, p, prm, range(2), range(2), "corrected"))
