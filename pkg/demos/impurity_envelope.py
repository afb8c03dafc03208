"""Impurity susceptibility against the free-band Roepstorff envelope.

The envelope (Curie value from above, a bracket-corrected Curie value
from below) is exact for an impurity in a free conduction band.  The
few-mode toy here is not that system, so the envelope is printed for
comparison rather than asserted; at weak coupling it pinches onto the
Curie law and the toy lands inside it anyway.
"""

from fidsus import bound_report, kondo_roepstorff, kondo_toy

print(f"{'beta':>6} {'J':>6} {'(4/b)chi_f':>12} {'lower':>10} {'upper':>10} {'inside':>7}")
for beta in (0.5, 1.0, 2.0):
    for j in (0.25, 0.5, 1.0):
        fam = kondo_toy(s2=1, mode_energies=(0.0, 0.5), j_coupling=j, beta=beta)
        rep = bound_report(fam, check_chi_n=False)
        chi4 = 4.0 * rep.chi_f / beta
        rec = kondo_roepstorff(beta, j, 1)
        inside = rec.lower <= chi4 <= rec.upper
        print(
            f"{beta:6.2f} {j:6.2f} {chi4:12.6f} {rec.lower:10.6f} "
            f"{rec.upper:10.6f} {str(inside):>7}"
        )

# the envelope collapses at weak coupling: beta_eps ~ (beta J)^2 and the
# lower edge climbs to within O(beta_eps) of the Curie value
rec = kondo_roepstorff(beta=0.05, j_coupling=0.5, s2=1)
print(f"\nweak coupling: beta_eps = {rec.beta_eps:.3e}")
print(f"relative envelope width = {(rec.upper - rec.lower) / rec.upper:.3e}")
print(f"bracket root x_star = {rec.x_star:.12f} (lower edge clips to 0 past it)")
