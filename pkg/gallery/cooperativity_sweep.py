"""
Spontaneous loss against cooperativity
======================================

The fraction of the excitation lost to free space falls like 1/(4 d_sc)
with the strong-coupling parameter d_sc = g^2/(kappa gamma_s). A sweep
over d_sc shows how close the full simulation gets to that law.
"""

from hotcavity.scenarios import sweep

table = sweep({"time.T": 30.0}, {"params.d_sc": [2.0, 5.4, 16.0, 49.0]}, workers=1)
cols = table["columns"]
print(" d_sc    P_spon   P_spon*4d_sc")
for row in table["rows"]:
    d, p = row[cols.index("d_sc")], row[cols.index("P_spon")]
    print(f"{d:5.1f}  {p:8.3%}   {4 * d * p:6.3f}")
