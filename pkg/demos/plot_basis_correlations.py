"""
Basis functions and correlation matrices
========================================

The Legendre basis members are shifted, normalized Legendre polynomials.
Member j has j - 1 turning points, so the early members act as detectors
for monotone, v-shaped and w-shaped dependence.  A copula gets summarized
by the matrix of generalized Spearman correlations over basis pairs.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from genspear import BasisFunction, GaussianCopula, basis_corr_matrix

u = np.linspace(0, 1, 400)

fig, ax = plt.subplots(figsize=(6, 4))
for j in range(1, 5):
    b = BasisFunction("legendre", j)
    ax.plot(u, b(u), label=f"order {j}")
ax.legend()
ax.set_xlabel("u")
fig.savefig("basis_members.png", dpi=120)

# the members are orthonormal on [0, 1]
b2 = BasisFunction("legendre", 2)
b3 = BasisFunction("legendre", 3)
print("E[B2 B3] =", np.trapz(b2(u) * b3(u), u))
print("E[B2^2]  =", np.trapz(b2(u) ** 2, u))

# for a Gaussian copula only the (1,1) entry is large; the whole first
# row and column of odd/even cross terms stays small
P = basis_corr_matrix(GaussianCopula(0.6), "legendre", 5)
with np.printoptions(precision=3, suppress=True):
    print(P.values)
