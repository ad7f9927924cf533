#!/usr/bin/env python3
"""Adapter that trains fine but returns prediction rows in reverse order."""
import csv
import os
import sys


def main(argv):
    if argv[1] == "train":
        os.makedirs(argv[3], exist_ok=True)
        with open(os.path.join(argv[3], "params.json"), "w") as f:
            f.write("{}")
        return 0
    if argv[1] == "predict":
        with open(argv[3], newline="") as f:
            ids = [row["id"] for row in csv.DictReader(f)]
        with open(argv[4], "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["id", "p_human", "p_generated"])
            for rid in reversed(ids):
                writer.writerow([rid, "0.5", "0.5"])
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv))
