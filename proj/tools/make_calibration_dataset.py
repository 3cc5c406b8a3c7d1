#!/usr/bin/env python3
"""Writes the synthetic calibration records bundled under data/calibration.

The records are synthetic. Bin counts are chosen so the accuracy curves reach
the reference accuracies of the road-crossing detector: 0.9825
on the true side at t = 0.45 and 0.975 on the false side at f = 0.2.
Scores sit at least 0.0005 away from every 0.05 grid point.
"""

import argparse
import random
from fractions import Fraction

# (low edge, width, true count, false count)
BINS = [
    (0.00, 0.05, 0, 11480),
    (0.15, 0.05, 357, 2443),
    (0.20, 0.05, 1890, 13790),
    (0.25, 0.05, 24, 1696),
    (0.30, 0.05, 65, 535),
    (0.35, 0.05, 10, 310),
    (0.40, 0.05, 15, 65),
    (0.45, 0.05, 0, 7),
    (0.50, 0.50, 393, 0),
]

PROPOSITIONS = [
    "traffic_light_is_green",
    "at_pedestrian_crossing",
    "car_on_road",
    "pedestrian_on_crossing",
]

MARGIN = 0.0005


def spread(lo, width, n):
    span = width - 2 * MARGIN
    return [round(lo + MARGIN + span * i / n, 6) for i in range(n)]


def build():
    rows = []
    for lo, width, n_true, n_false in BINS:
        if lo == 0.0:
            # Undetected objects score exactly zero; the rest are faint detections.
            zeros = n_false // 2
            rows += [(0.0, False)] * zeros
            rows += [(s, False) for s in spread(lo, width, n_false - zeros)]
        else:
            rows += [(s, False) for s in spread(lo, width, n_false)]
        rows += [(s, True) for s in spread(lo, width, n_true)]
    random.Random(20240417).shuffle(rows)
    return [(PROPOSITIONS[i % len(PROPOSITIONS)], s, t) for i, (s, t) in enumerate(rows)]


def accuracy(rows, threshold, true_side):
    if true_side:
        hits = [t for _, s, t in rows if s >= threshold]
        return Fraction(sum(hits), len(hits))
    hits = [not t for _, s, t in rows if s <= threshold]
    return Fraction(sum(hits), len(hits))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output")
    args = parser.parse_args()
    rows = build()
    assert accuracy(rows, 0.45, True) == Fraction(393, 400)
    assert accuracy(rows, 0.2, False) == Fraction(39, 40)
    with open(args.output, "w", newline="\n") as out:
        out.write("proposition,score,truth\n")
        for prop, score, truth in rows:
            out.write(f"{prop},{score:.6f},{'true' if truth else 'false'}\n")


if __name__ == "__main__":
    main()
