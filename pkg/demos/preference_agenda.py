"""
The preference agenda
=====================

Pairwise comparisons between m alternatives, constrained to be transitive.
Complete consistent judgment sets are exactly the strict rankings.
"""

import math

from judgagg import make_preference_agenda
from judgagg.core import enumerate_consistent_complete
from judgagg.decomposition import find_finest_independent_partition, iter_iods

for m in (2, 3, 4):
    a = make_preference_agenda(m)
    print(m, "alternatives:", a.m, "issues,", len(enumerate_consistent_complete(a)), "rankings,",
          "m! =", math.factorial(m))

# Three alternatives: no way to split the comparisons
a3 = make_preference_agenda(3)
print("m=3 overlapping decompositions:", list(iter_iods(a3)))

# Four alternatives: no disjoint split either...
a4 = make_preference_agenda(4)
print("m=4 finest partition:", find_finest_independent_partition(a4).blocks)

# ...but overlapping ones exist. Leave 1P2 out of one block and 3P4 out of
# the other: every triple of alternatives is then fully inside one block,
# so two rankings that agree on the shared comparisons glue into a ranking.
for d in iter_iods(a4):
    left = [str(a4.preagenda[i]) for i in d.blocks[0]]
    right = [str(a4.preagenda[i]) for i in d.blocks[1]]
    print(left, "|", right)
