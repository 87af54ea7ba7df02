"""
Attainable correlation ranges and extremal support sets
=======================================================

Generalized Spearman correlations of non-identical transformation pairs
cannot reach the full interval [-1, 1].  The sharp range follows from a
rearrangement argument, and the copulas attaining it concentrate on
curves defined by the induced uniformity-preserving transformations.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from genspear import BasisFunction, bounds, support_set


def L(j):
    return BasisFunction("legendre", j)


# the (2,2) minimum is the exact fraction -7/8
b = bounds(L(2), L(2))
print("range of rho_22:", b.minimum, b.maximum)

# the (1,2) range is symmetric, +-sqrt(15/16)
b = bounds(L(1), L(2))
print("range of rho_12:", b.minimum, b.maximum)

fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
for ax, j in zip(axes, (3, 4)):
    pts = support_set(L(j), L(j), "max", 300)
    ax.plot(pts[:, 0], pts[:, 1], ".", ms=2)
    ax.set_title(f"support of the (%d,%d) maximizer" % (j, j))
    ax.set_aspect("equal")
fig.savefig("support_sets.png", dpi=120)

# order 3 pairs the diagonal with an ellipse, order 4 with a circle of
# radius sqrt(3/14) around the center
pts = support_set(L(4), L(4), "max", 300)
u, v = pts[:, 0], pts[:, 1]
on_circle = np.abs((u - 0.5) ** 2 + (v - 0.5) ** 2 - 3.0 / 14.0) < 1e-8
print("fraction of grid points on the circle branch:", on_circle.mean())
