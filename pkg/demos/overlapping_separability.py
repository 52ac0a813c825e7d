"""
Overlapping blocks: who survives
================================

Eight issues over atoms p, q, r, s. The left block talks about p and the
right block about s, and both mention q and r. The blocks overlap but are
still independent once they agree on the shared issues.
"""

from judgagg import Agenda, Kind, Profile, RuleId, load_fixture, make_decomposition
from judgagg.separability import check_oas_instance

doc = load_fixture("F2")
agenda, profile = doc.agenda, doc.profile
d = make_decomposition(agenda, [doc.blocks["A1"], doc.blocks["A2"]], Kind.IOD)
print("shared issues:", [str(agenda.preagenda[i]) for i in d.overlap])

# The maxcard, median and full-Hamming rules each pick one set per block, the
# two agree on q and r, and yet the whole agenda yields two sets.
for rule in (RuleId.MCC, RuleId.MED, RuleId.FULL_H, RuleId.MC, RuleId.RA):
    r = check_oas_instance(rule, agenda, profile, d)
    print(f"{rule.value:7s} {r.verdict.value}")
    if r.witness:
        direct, recombined = r.witness
        print("   direct    ", [j.sign_string() for j in direct])
        print("   recombined", [j.sign_string() for j in recombined])

# The reversal-scoring rule fails too. This instance came out of the
# randomized hunt in the property suite.
a = Agenda.from_strings(["~s0 & ~s1 <-> u0 | ~s0", "~s1", "s0", "s1 & s0 | (s1 -> ~v0)", "v0"])
p = Profile.from_signs(a, ["+-+++", "+-++-", "----+", "-++++", "++++-"])
d = make_decomposition(a, [[0, 1, 2], [1, 2, 3, 4]], Kind.IOD)
r = check_oas_instance(RuleId.REV, a, p, d)
print("rev", r.verdict.value, [j.sign_string() for j in r.direct], [j.sign_string() for j in r.recombined])
