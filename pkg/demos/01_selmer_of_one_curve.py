"""Walk through the 3-isogeny descent for y^2 = x^3 + 2.

The curve has rank 1, generated by (-1, 1).  Selmer classes are binary cubic
forms of a fixed discriminant that are soluble at every place; we list them,
map them to Q(sqrt 2), and find the class of the generator among them.
"""

from mordell_selmer.cubic_forms import enumerate_classes
from mordell_selmer.curves import CurvePoint, kummer_delta
from mordell_selmer.local import bad_primes, is_locally_soluble
from mordell_selmer.selmer import KElem, delta_invariant, is_cube_in_K, selmer_group

k = 2


def show(d):
    return f"{d.x} {'-' if d.y < 0 else '+'} {abs(d.y)} sqrt({d.k})"


print(f"E_{k}: y^2 = x^3 + {k}")
for iso, D in (("phi", -108 * k), ("phihat", 2916 * k)):
    forms = enumerate_classes(D)
    soluble = [f for f in forms if all(is_locally_soluble(f, p) for p in bad_primes(f))]
    print(f"\n{iso}: {len(forms)} integral classes with disc {D}, {len(soluble)} soluble everywhere")
    # integral classes with the same delta up to cubes are one rational class
    reps = []
    for f in soluble:
        d = delta_invariant(f)
        if not any(is_cube_in_K(d / e) for e in reps):
            reps.append(d)
        print(f"  {f.to_json()}  delta = {show(d)}")
    rep = selmer_group(k, iso)
    print(f"  {len(reps)} rational classes; |Sel_{iso}| = {rep.size}, checks {rep.checks}")

# the generator's Kummer class appears among the phihat classes
P = CurvePoint.affine(-1, 1)
d = kummer_delta(k, P)
print(f"\nKummer class of (-1, 1): {show(d)}; a cube? {is_cube_in_K(d)}")
for f, e in selmer_group(k, "phihat").class_reps:
    e = KElem(k, e.x, 27 * e.y)
    print(f"  class {f.to_json()}: contains the generator? {is_cube_in_K(d / e)}")

