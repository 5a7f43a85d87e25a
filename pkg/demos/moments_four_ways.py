"""
Tetilla moments four ways
=========================

The even moments of the tetilla law come out of four unrelated computations.
They agree as exact rationals.
"""

from tetilla import reference_tetilla_kernel, wigner_moment
from tetilla.chaos import tetilla_moment_algorithm
from tetilla.transforms import moments_from_cumulants, tetilla_cumulants, tetilla_moment_closed

# Closed form: a finite sum of binomials.
closed = [tetilla_moment_closed(n) for n in range(1, 7)]

# Free cumulants 2^(1 - m/2) at even orders, summed over non-crossing partitions.
via_cumulants = moments_from_cumulants(tetilla_cumulants(12), 12)[1::2]

# A coupled recursion on split sums of contraction strings.
via_recursion = list(tetilla_moment_algorithm(6).moments.values())

# The second-chaos kernel (e1 x e2 + e2 x e1)/sqrt(2): contraction strings summed over walks.
f = reference_tetilla_kernel()
via_kernel = [wigner_moment(f, 2 * n) for n in range(1, 7)]

print(f"{'order':>5}  {'closed':>10}  {'cumulants':>10}  {'recursion':>10}  {'kernel':>10}")
for n, row in enumerate(zip(closed, via_cumulants, via_recursion, via_kernel), 1):
    print(f"{2 * n:>5}  " + "  ".join(f"{str(v):>10}" for v in row))
    assert len(set(row)) == 1

# Odd moments of the kernel vanish because the kernel is mirror-symmetric.
print("odd moments:", [str(wigner_moment(f, l)) for l in (3, 5, 7)])
