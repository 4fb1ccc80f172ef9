"""Regenerates resolution_fixture.tsv from dictionaries.tsv.

25 surface forms per strict label: every listed variant first, then
spelling noise on canonical terms (case, hyphens, plurals, spacing).
"""
import csv
import random

rng = random.Random(3)
rows = {}
with open("dictionaries.tsv") as f:
    for label, canonical, variant in csv.reader(f, delimiter="\t"):
        if label == "label":
            continue
        rows.setdefault(label, []).append((canonical, variant))


def noisy(term):
    kind = rng.randrange(4)
    if kind == 0:
        return term.upper() if len(term) < 12 else term.title()
    if kind == 1 and "-" in term:
        return term.replace("-", " ")
    if kind == 2 and not term.endswith("s") and term[-1].isalpha():
        return term + "s"
    return "  " + term.capitalize() + " "


forced = {("Application", "Li-ion batteries"), ("Synthesis", "solution casting method")}
out = []
for label in ["Application", "Structure/Phase", "Synthesis", "Characterization"]:
    pairs = rows[label]
    variants = [(c, v) for c, v in pairs if v]
    picked = [p for p in variants if (label, p[1]) in forced]
    rest = [p for p in variants if (label, p[1]) not in forced]
    rng.shuffle(rest)
    picked += rest[: 15 - len(picked)]
    canon = sorted({c for c, _ in pairs})
    rng.shuffle(canon)
    for c in canon:
        if len(picked) == 25:
            break
        surface = noisy(c)
        if surface != c:
            picked.append((c, surface))
    assert len(picked) == 25, label
    out += [(label, s, c) for c, s in picked]

with open("resolution_fixture.tsv", "w") as f:
    f.write("label\traw\texpected\n")
    for label, raw, expected in out:
        f.write(f"{label}\t{raw}\t{expected}\n")
