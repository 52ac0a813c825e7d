"""
Minimax distance is not agenda separable
=========================================

Three voters judge p, q, p & q and an unrelated issue t. The first three
issues share no atom with t, so the agenda splits into two independent
blocks. Most rules give the same answer whether they see the whole agenda
or each block separately. The minimax Hamming rule does not.
"""

from judgagg import load_fixture, make_decomposition, RuleId, check_as_instance
from judgagg.core import restrict_profile
from judgagg.decomposition import find_finest_independent_partition
from judgagg.rules import get_rule

doc = load_fixture("F1")
agenda, profile = doc.agenda, doc.profile
for j in profile:
    print("voter", j.describe())

# The partition search recovers the two blocks on its own
d = find_finest_independent_partition(agenda)
print("blocks:", d.blocks)

# Whole agenda: a single winner
rmax = get_rule(RuleId.RMAX)
print("rmax on everything:", [j.describe() for j in rmax(agenda, profile)])

# Block by block: three winners on the left, two on the right
for block in d.blocks:
    sub = restrict_profile(profile, block)
    print("rmax on", block, [j.describe() for j in rmax(sub.agenda, sub)])

# Six recombined sets against one direct set
report = check_as_instance(RuleId.RMAX, agenda, profile, make_decomposition(agenda, d.blocks))
direct, recombined = report.witness
print(report.verdict.value, len(direct), "vs", len(recombined))

# The median rule, by contrast, decomposes cleanly
print("med:", check_as_instance(RuleId.MED, agenda, profile, d).verdict.value)
