"""
Aggregating block by block
==========================

When an agenda splits into K independent blocks, a separable rule can be run
on each block and the answers glued back together. The judgment sets of the
whole agenda multiply across blocks, while blockwise work only adds up.
"""

from judgagg.cli import bench

print(" K  issues   direct ms  blockwise ms  speedup  equal")
for k in (1, 2, 3, 4):
    r = bench(k, 2, 5, "med", seed=0, repeat=10)
    print(f"{k:2d}  {r['issues']:6d}  {r['direct_seconds'] * 1e3:10.3f}  "
          f"{r['decomposed_seconds'] * 1e3:12.3f}  {r['speedup']:7.2f}  {r['outputs_equal']}")

# The full-Hamming rule searches over whole profiles, so it gains the most
r = bench(3, 2, 3, "full_h", seed=1, repeat=3)
print("full_h, K=3:", f"{r['speedup']:.1f}x", "equal" if r["outputs_equal"] else "DIFFERENT")

# Minimax distance is not separable, so the two answers need not match
r = bench(3, 2, 3, "rmax", seed=1, repeat=3)
print("rmax, K=3: outputs equal?", r["outputs_equal"])
