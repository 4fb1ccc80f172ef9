"""Regenerates toy_kg.tsv: 40 entities, 4 relations, 200 triples.

Entities sit at random points in the plane and every relation is a fixed
translation; the tail of (h, r) is the entity nearest to pos(h) + vec(r)
(second nearest for the 10 extra heads per relation).
"""
import numpy as np

rng = np.random.default_rng(20240611)
pos = rng.uniform(0.0, 10.0, size=(40, 2))
rel = np.array([[2.0, 0.0], [0.0, 2.0], [-1.5, 1.5], [1.5, 1.5]])

rows = []
for r, v in enumerate(rel):
    extra = set(rng.choice(40, size=10, replace=False).tolist())
    for h in range(40):
        d = np.linalg.norm(pos - (pos[h] + v), axis=1)
        d[h] = np.inf
        order = np.argsort(d, kind="stable")
        rows.append((h, r, int(order[0])))
        if h in extra:
            rows.append((h, r, int(order[1])))

assert len(rows) == 200 and len(set(rows)) == 200
with open("toy_kg.tsv", "w") as f:
    f.write("head\trelation\ttail\n")
    for h, r, t in rows:
        f.write(f"e{h}\tr{r}\te{t}\n")
