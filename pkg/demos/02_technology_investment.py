"""Investing resources to extract more resources.

With extraction r(t) = 2*sqrt(t), the marginal return falls to one at
t = 1, so the unconstrained optimum invests one unit to extract two.  When
the whole economy only holds 1.5 units, extraction is capped: the optimum
becomes the cheapest investment that extracts everything (the corner).
"""

import numpy as np

import junglesim as js
from junglesim.oracles import technology_grid_argmax

extraction = js.power(2.0, 0.5)

for stock in (10.0, 1.5):
    sol = js.optimize_technology(extraction, stock)
    grid_t, grid_net = technology_grid_argmax(extraction, stock)
    print(f"stock X = {stock}")
    print(f"  invest {sol.theta_star:.6f} -> extract {sol.extracted:.6f} "
          f"(net {sol.net:.6f}){' [corner]' if sol.corner else ''}")
    print(f"  brute-force grid agrees: argmax {grid_t:.6f}, net {grid_net:.6f}")

print("\nflat unit-return technology r(t) = t: any investment is a wash")
print(" ", js.optimize_technology(js.linear(1.0), 5.0))

print("\nsub-unit returns r(t) = 0.5 t: investing never pays (degenerate)")
print(" ", js.optimize_technology(js.linear(0.5), 5.0))

# the whole net curve for the scarce case, for plotting elsewhere
ts = np.linspace(0.0, 1.2, 13)
net = np.minimum(js.evaluate(extraction, ts), 1.5) - ts
print("\nnet extraction profile at X = 1.5:")
for t, b in zip(ts, net):
    bar = "#" * max(0, int(40 * max(b, 0)))
    print(f"  t={t:4.1f}  net={b:+.3f} {bar}")
