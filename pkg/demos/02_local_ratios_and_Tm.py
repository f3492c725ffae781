"""Local Selmer ratios, the global ratio and the sets T_m.

For each k the local ratios c_p are powers of 3; their product 3^m decides
which T_m contains k.  Two independent routes give c_p at finite primes: a
closed formula and a ratio of Tamagawa numbers from Tate's algorithm.
"""

from collections import Counter

from mordell_selmer.local import local_ratio_closed, local_ratio_tamagawa
from mordell_selmer.selmer import classify_Tm, place_exponents, selmer_group
from mordell_selmer.densities import tm_densities

for k in (1, 2, 5, -11, 50, 3**5 * 2, -432):
    ex = place_exponents(k)
    tam = {p: local_ratio_tamagawa(k, p).e for p in ex if p != "inf"}
    agree = all(local_ratio_closed(k, p).e == e for p, e in tam.items())
    sizes = selmer_group(k).size, selmer_group(k, "phihat").size
    print(f"k={k:5d}  exponents {ex}  m={classify_Tm(k):+d}  closed==Tate: {agree}  |Sel_phi|, |Sel_phihat| = {sizes}")

# empirical T_m frequencies against the limiting densities
X = 3000
counts = Counter(classify_Tm(k) for k in range(-X, X + 1) if k)
t = tm_densities(range(-4, 5), 10**4)
print(f"\nm   share of |k| <= {X}   density")
for m in range(-3, 3):
    print(f"{m:+d}   {counts[m] / (2 * X):.4f}            {t.mu(m):.4f}")
