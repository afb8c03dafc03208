"""Tour of the report machinery on one random (T, S) pair.

Builds a seeded GUE-style family, prints the full bound report, then
rebuilds the same operators at colder and colder temperatures to show
the sandwich closing: the relative gap between the upper bound and
chi_F shrinks roughly like beta^2 as beta -> 0 and the bounds pinch.
"""

from fidsus import bound_report, family_at_beta, random_pair

fam = random_pair(dim=8, seed=20260822, beta=2.0)
rep = bound_report(fam)

print("bound report, dim 8, seed 20260822, beta 2.0")
for name in (
    "chi_f",
    "chi_f_classical",
    "chi_f_quantum",
    "upper",
    "lower_paper",
    "lower_aasc",
    "ds2",
    "bd_product",
    "dcomm",
    "chi_n",
):
    print(f"  {name:16s} {getattr(rep, name):.12f}")
print(f"  sandwich_ok      {rep.sandwich_ok}")

# max(lower_paper, lower_aasc, 0) <= chi_f <= upper, always; which lower
# edge binds depends on temperature
print("\nbeta scan of the same operators:")
print(f"{'beta':>8} {'chi_f':>14} {'upper':>14} {'rel gap':>10} {'binding lower':>14}")
for beta in (4.0, 2.0, 1.0, 0.5, 0.25, 0.125):
    r = bound_report(family_at_beta(fam, beta), check_chi_n=False)
    gap = (r.upper - r.chi_f) / r.upper
    binding = max(r.lower_paper, r.lower_aasc, 0.0)
    which = (
        "lower_paper"
        if binding == r.lower_paper
        else ("lower_aasc" if binding == r.lower_aasc else "zero")
    )
    print(f"{beta:8.3f} {r.chi_f:14.8f} {r.upper:14.8f} {gap:10.2e} {which:>14}")
