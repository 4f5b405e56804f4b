#!/usr/bin/env python3
"""Writes the four shipped rule sets into data/rules/.

The sets are deterministic: rerunning this script reproduces the files byte
for byte.
"""

import itertools
import json
import pathlib

MONADIC = ["IsPedestrian", "IsStopped", "IsFast", "AtCrossing"]
RELATIONAL = ["Near", "InIntersection", "Ahead", "SameHeading", "Approaching", "Following"]
SLOTS = MONADIC + RELATIONAL
PRIORITY = ["Stop", "Slow", "Fast", "Normal"]

ORIGINAL = [
    ({"InIntersection": 1, "IsPedestrian": 1}, "Stop"),
    ({"Ahead": 1, "IsStopped": 1, "Near": 1}, "Stop"),
    ({"Ahead": 1, "IsPedestrian": 1}, "Stop"),
    ({"InIntersection": 1, "IsStopped": 1}, "Stop"),
    ({"InIntersection": 1, "Approaching": 1, "SameHeading": 0}, "Slow"),
    ({"Near": 1, "IsPedestrian": 1}, "Slow"),
    ({"Ahead": 1, "Near": 1}, "Slow"),
    ({"AtCrossing": 1, "IsFast": 1, "Approaching": 1}, "Slow"),
    ({"Approaching": 1, "IsFast": 1, "Near": 1}, "Slow"),
    ({"Following": 1, "IsFast": 1, "Near": 1}, "Fast"),
    ({"Following": 1, "Near": 1, "SameHeading": 1}, "Fast"),
    ({"Ahead": 1, "SameHeading": 1, "IsFast": 1}, "Normal"),
]


def key(when):
    return tuple(sorted(when.items()))


def extended():
    """The original rules plus three one-slot refinements of each."""
    out = list(ORIGINAL)
    seen = {key(w) for w, _ in out}
    for i, (when, action) in enumerate(ORIGINAL):
        added = 0
        j = 0
        while added < 3:
            slot = SLOTS[(3 * i + 7 * j) % len(SLOTS)]
            value = (i + j) % 2
            j += 1
            if slot in when:
                continue
            refined = dict(when)
            refined[slot] = value
            if key(refined) in seen:
                continue
            seen.add(key(refined))
            out.append((refined, action))
            added += 1
    return out


def spatial_action(when):
    on = {p for p, v in when.items() if v}
    if "Ahead" in on and ("Near" in on or "Approaching" in on):
        return "Stop"
    if "InIntersection" in on:
        return "Slow"
    if "Following" in on:
        return "Fast"
    return "Normal"


def spatial():
    """Every pair of relational predicates, both true or first true and second false."""
    out = []
    for a, b in itertools.combinations(RELATIONAL, 2):
        for vb in (1, 0):
            when = {a: 1, b: vb}
            out.append((when, spatial_action(when)))
    return out


def discriminative():
    """Each hypothesis pins the full entity-type profile (every monadic slot), so
    hypotheses of different types never share a witnessing entity."""
    out = []
    # (IsPedestrian, IsStopped, IsFast) profiles that the simulator can realise.
    car_rules = {
        (0, 1, 0): [("Ahead", "Stop"), ("InIntersection", "Stop"), ("Near", "Slow")],
        (0, 0, 0): [("Ahead", "Slow"), ("Approaching", "Slow"), ("Following", "Normal")],
        (0, 0, 1): [("Approaching", "Slow"), ("Following", "Fast"), ("Ahead", "Normal")],
    }
    pedestrian_rules = [("Near", "Stop"), ("InIntersection", "Stop"), ("Ahead", "Stop"),
                        ("Approaching", "Stop"), ("SameHeading", "Slow"), ("Following", "Slow")]
    for crossing in (1, 0):
        for relation, action in pedestrian_rules:
            out.append(({"IsPedestrian": 1, "IsStopped": 0, "IsFast": 0,
                         "AtCrossing": crossing, relation: 1}, action))
        for (ped, stopped, fast), rules in car_rules.items():
            for relation, action in rules:
                out.append(({"IsPedestrian": ped, "IsStopped": stopped, "IsFast": fast,
                             "AtCrossing": crossing, relation: 1}, action))
    return out


def dump(name, rules, path):
    assert len({key(w) for w, _ in rules}) == len(rules), name
    doc = {
        "name": name,
        "action_priority": PRIORITY,
        "hypotheses": [{"when": when, "action": action} for when, action in rules],
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data" / "rules"
    root.mkdir(parents=True, exist_ok=True)
    sets = {
        "original": ORIGINAL,
        "extended": extended(),
        "spatial": spatial(),
        "discriminative": discriminative(),
    }
    for name, rules in sets.items():
        dump(name, rules, root / f"{name}.json")
        print(f"{name}: {len(rules)} hypotheses")


if __name__ == "__main__":
    main()
