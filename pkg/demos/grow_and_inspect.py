# Grow a few random Apollonian networks and poke at their structure.
#
# Every instance is just a seed and a choice sequence: insertion i picks a
# live leaf face, drops a new vertex inside, and wires it to the three
# corners.  The counts below are exact for every instance, not averages.

import numpy as np

from apollonia import ran

N = 2000
SEED = 7

g = ran.generate(N, SEED)
print(f"n = {g.n} insertions, seed = {SEED}")
print(f"vertices    : {g.vertex_count}  (= n + 3)")
print(f"edges       : {g.edge_count}  (= 3n + 3)")
print(f"leaf faces  : {g.leaf_face_count}  (= 2n + 1)")

# degree of the newest vertex is always 3, the corners only grow
adj = ran.adjacency(g)
newest = g.vertex_count - 1
print(f"degree of newest vertex {newest}: {len(adj[newest])}")
print(f"degree of corner 0: {len(adj[0])}")

# the instance file format is tiny and exact: replaying the stored
# choices rebuilds the identical object
blob = ran.serialize(g)
print(f"serialized size: {len(blob)} bytes")
again = ran.deserialize(blob)
print(f"roundtrip identical: {np.array_equal(again.choices, g.choices)}")

# prefixes are instances too, and extend() continues the process with a
# fresh stream; chopping the extension back off recovers the prefix
head = ran.prefix(g, 500)
longer = ran.extend(head, 1000, SEED)
print(f"prefix(extend(head)) == head: "
      f"{np.array_equal(ran.prefix(longer, 500).choices, head.choices)}")
print(f"extend is deterministic: "
      f"{np.array_equal(ran.extend(head, 1000, SEED).choices, longer.choices)}")

# the first few faces ever created, and who owns them now
print("first insertions chose faces:", g.choices[:8])
