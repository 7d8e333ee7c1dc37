"""Adjoint distributors on a three-point metric space over lawvere-chain(4).

A finite metric space is Cauchy complete, so every left adjoint out of the
one-point space should be represented by a point.  A non-symmetric,
non-separated variant shows the completion collapsing isomorphic points.
"""

import numpy as np

from toptheory import is_cauchy_complete, lawvere_chain, left_adjoint_distributors
from toptheory.cauchy import cauchy_completion
from toptheory.duality import right_adjoint_checks
from toptheory.tcat import TCategory
from toptheory.theory import make_theory

L = lawvere_chain(4)
theory = make_theory("finite-ultrafilter", L)
d = L.el


def describe(name, space):
    print(f"\n== {name}")
    for pair in left_adjoint_distributors(space):
        print("  left adjoint", pair.to_dict(space))
    print("  cauchy complete:", is_cauchy_complete(space).verdict.value)
    tilde, yoneda, _ = cauchy_completion(space)
    print("  completion objects:", list(tilde.labels), "| yoneda:", yoneda)
    report = right_adjoint_checks(space)
    print("  right-adjoint hom laws:", {c.law: c.verdict.value for c in report.checks})


line = TCategory(theory, 3, np.array([[d("0"), d("1"), d("2")],
                                      [d("1"), d("0"), d("1")],
                                      [d("2"), d("1"), d("0")]]), ["p", "q", "r"])
describe("three points on a line", line)

twins = TCategory(theory, 3, np.array([[d("0"), d("0"), d("inf")],
                                       [d("0"), d("0"), d("inf")],
                                       [d("1"), d("1"), d("0")]]), ["p", "p'", "r"])
describe("two points at distance zero, one far away", twins)
