# Longest simple paths three ways: exhaustive search, the linear-time
# profile dynamic program, and a greedy heuristic.
#
# Path length is counted in edges.  The bare triangle has length 2, one
# insertion (the tetrahedron) has length 3.

import math

from apollonia import ran
from apollonia.longest_path import (
    heuristic_long_path,
    longest_path_bruteforce,
    longest_path_exact,
    validate_path,
)

# tiny instances: the DP must agree with brute force exactly
print("n  seed  brute  exact")
for n in (0, 1, 4, 8, 10):
    for seed in (0, 1):
        g = ran.generate(n, seed)
        adj = ran.adjacency(g)
        lb, _ = longest_path_bruteforce(adj)
        le, path = longest_path_exact(g)
        assert lb == le and validate_path(adj, path)
        print(f"{n:<3}{seed:>4}{lb:>7}{le:>7}")

# the witness is a real path in the graph, returned as a vertex list
g = ran.generate(30, 3)
length, path = longest_path_exact(g)
print(f"\nn=30 longest path has {length} edges:")
print(path)

# exact versus greedy at sizes brute force cannot touch
print("\nn       exact  greedy  n^log3(2)+2")
for n in (100, 1000, 10000, 100000):
    g = ran.generate(n, 0)
    exact, _ = longest_path_exact(g)
    greedy = len(heuristic_long_path(g)) - 1
    bound = n ** math.log(2, 3) + 2
    print(f"{n:<8}{exact:<7}{greedy:<8}{bound:.1f}")
