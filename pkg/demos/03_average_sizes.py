"""Average Selmer sizes: the Euler product, the T_m law and a small census.

Over negative k the average size of Sel_phi tends to 1 + r, over positive k
to 1 + r/3.  A census at small X already shows the negative side larger;
convergence is slow.
"""

from mordell_selmer.densities import (
    AcceptableSetSpec,
    avg_selmer_for_set,
    empirical_average,
    global_r,
    rank_bound_report,
    tm_densities,
)

g = global_r(18)
print(f"Euler product = {g['product']}")
print(f"r = {g['r']}, 1 + r = {g['one_plus_r']}, 1 + r/3 = {g['one_plus_r_over_3']}")

t = tm_densities(range(-4, 5), 10**4)
neg = sum(2 * t.mu_minus(m) * (1 + 3.0**m) for m in range(-15, 15))
pos = sum(2 * t.mu_plus(m) * (1 + 3.0**m) for m in range(-15, 15))
print(f"\nfrom the T_m law: negative {neg:.5f}, positive {pos:.5f}")
for sign in ("negative", "positive"):
    print(f"local integration, {sign}: {float(avg_selmer_for_set(AcceptableSetSpec(sign=sign))):.5f}")

S = AcceptableSetSpec({2: ((5, 3),), 3: ((5, 2),)}, "positive", squarefree_elsewhere=True)
print(f"\nk = 5 mod 8, 5 mod 9, positive, squarefree elsewhere: phi {avg_selmer_for_set(S, 'phi')}, "
      f"phihat {float(avg_selmer_for_set(S, 'phihat')):.4f}")

rep = rank_bound_report()
print(f"\naverage rank bound {rep['avg_rank_bound']:.4f}, refined {rep['refined_bound']:.4f}")
print(f"rank 0 >= {rep['rank0_proportion']:.4f}, rank 1 >= {rep['rank1_proportion']:.4f}")

X = 600
for sign in ("negative", "positive"):
    e = empirical_average(X, AcceptableSetSpec(sign=sign))
    print(f"census |k| <= {X}, {sign}: {e.count} curves, average |Sel_phi| = {e.average:.3f}")
