"""Walk through opens, points and the comparison map on the chain a <= b."""

import numpy as np

from toptheory import eta, main_thm, omega, pt, two
from toptheory.tcat import TCategory
from toptheory.theory import make_theory


def show(title, rows):
    print(f"\n{title}")
    for row in rows:
        print("  ", row)


chain = TCategory(make_theory("identity", two()), 2, np.array([[1, 1], [0, 1]]), ["a", "b"])
opens = omega(chain)
show("opens (T-functors into two), as values on (a, b):", opens.labels)

points = pt(opens)
show("points (frame homomorphisms into two), as values on each open:",
     [tuple(int(v) for v in hom) for hom in points.homs])

images, naturality = eta(chain)
print("\neta sends a, b to points", images, "| check:", naturality.verdict.value)

report = main_thm(chain, oracle=True)
show("comparison with the Cauchy completion:",
     [f"{c.law}: {c.verdict.value}" for c in report.checks])
print("\nsummary:", {key: report.data[key] for key in
                     ("points", "eta-injective", "eta-surjective", "cauchy-complete")})
