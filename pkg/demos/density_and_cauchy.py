"""
Density from two directions
===========================

The tetilla density has a closed form built from real cube roots.  The same
density is recovered by Stieltjes inversion of the Cauchy transform, whose
value at each point is one root of a cubic.
"""

import numpy as np

from tetilla.transforms import TETILLA_EDGE, density_from_cauchy, density_moment, tetilla_density

print(f"support: [-{TETILLA_EDGE:.6f}, {TETILLA_EDGE:.6f}]")

ts = np.linspace(-TETILLA_EDGE, TETILLA_EDGE, 15)
print(f"{'t':>9}  {'h(t)':>10}  {'-Im G/pi':>10}")
for t in map(float, ts):
    print(f"{t:9.4f}  {tetilla_density(t):10.6f}  {density_from_cauchy(t):10.6f}")

# The density blows up at the origin and has moments 1, 1, 5/2, 33/4.
for k in (0, 2, 4, 6):
    print(f"int t^{k} h(t) dt = {density_moment(k):.10f}")

# A crude text histogram of the shape.
for t in np.linspace(0.05, TETILLA_EDGE, 12):
    print(f"{t:5.2f} " + "#" * int(40 * tetilla_density(float(t))))
