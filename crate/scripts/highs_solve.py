#!/usr/bin/env python3
"""Solve an LP file with HiGHS and write `status` plus `name value` lines.

Usage as a solver template:
    TRACKPLACE_SOLVER='python3 scripts/highs_solve.py {lp} {sol} {budget}'
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) not in (3, 4):
        print(__doc__, file=sys.stderr)
        return 1
    lp, sol = sys.argv[1], sys.argv[2]
    budget = float(sys.argv[3]) if len(sys.argv) == 4 else 0.0

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if budget > 0:
        h.setOptionValue("time_limit", budget)
    if h.readModel(lp) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    names = h.getLp().col_names_
    values = h.getSolution().col_value

    with open(sol, "w") as out:
        word = "optimal" if status == highspy.HighsModelStatus.kOptimal else "best-found"
        if len(values) != len(names):
            word = "no-solution"
        out.write(f"status {word}\n")
        for name, value in zip(names, values):
            out.write(f"{name} {value:.9g}\n")
    return 0 if len(values) == len(names) else 2


if __name__ == "__main__":
    sys.exit(main())
