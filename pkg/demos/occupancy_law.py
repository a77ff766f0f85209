# The occupancy law: watch a group of leaf faces while insertions keep
# landing, and count how many land inside the watched group.
#
# Each insertion replaces one leaf face with three, so a group holding
# tau faces grows by two each time it is hit: a self-reinforcing urn.

import numpy as np

from apollonia.occupancy import (
    OccupancyLaw,
    count_tail_violations,
    occupancy_pmf,
    occupancy_pmf_exact,
    sample_occupancy,
    tail_threshold,
)
from apollonia import ran

# small cases have exact rational answers
law = OccupancyLaw(faces=3, marked=1, insertions=2)
for m in range(3):
    print(f"P(m={m} of 2 insertions hit 1 of 3 faces) = {occupancy_pmf_exact(law, m)}")

# a bigger law, simulated and computed
law = OccupancyLaw(faces=21, marked=5, insertions=50)
samples = sample_occupancy(law, seed=1, size=200_000)
print("\nm    law        simulated  (faces=21, marked=5, insertions=50)")
for m in range(0, 51, 10):
    p = occupancy_pmf(law, m)
    q = float(np.mean(samples == m))
    print(f"{m:<5}{p:<11.6f}{q:.6f}")

# the mean is exactly the uniform share (hits are exchangeable), but the
# self-reinforcement shows up as variance: a plain binomial with the same
# mean would be much tighter
pmf = np.array([occupancy_pmf(law, m) for m in range(51)])
mean = float(np.arange(51) @ pmf)
var = float((np.arange(51) - mean) ** 2 @ pmf)
p = 5 / 21
print(f"law mean {mean:.4f} (uniform share 50 * 5/21 = {50 * p:.4f})")
print(f"law variance {var:.2f} vs binomial {50 * p * (1 - p):.2f}")

# the tail bound: no tau-face group of a sigma-prefix should ever soak up
# more than the threshold, even picking the heaviest group after the fact
sigma, tau, steps = 50, 5, 2000
g = ran.generate(sigma, 0)
print(f"\nthreshold({tau} of {2 * sigma + 1} faces, {steps} insertions) = "
      f"{tail_threshold(tau, sigma, steps):.1f}")
report = count_tail_violations(g, sigma, tau, steps, trials=2000, seed=5)
print(f"worst group total over {report.trials} trials: {report.worst}")
print(f"violations: {report.violations}")
