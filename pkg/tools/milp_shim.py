#!/usr/bin/env python3
"""MILP solver shim backed by scipy's HiGHS interface.

Reads a CPLEX-style LP file (the dialect this repo's LP writer emits),
solves it with scipy.optimize.milp, and writes a solution file in the
"pairs" format: a `status:` line followed by `name value` lines.

Usage: milp_shim.py FILE.lp SOLUTION.out
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)),
                                os.pardir, "src"))

import numpy as np
from scipy import optimize, sparse

from fgsynth.ilp.lpfile import parse_lp_file


def main():
    if len(sys.argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    with open(sys.argv[1]) as fh:
        m = parse_lp_file(fh.read())
    index = {v.name: i for i, v in enumerate(m.variables)}
    n = len(m.variables)
    lb = np.array([v.lb for v in m.variables])
    ub = np.array([v.ub for v in m.variables])
    integrality = np.array([1 if v.integral else 0 for v in m.variables])
    cons = []
    if m.rows:
        data, ri, ci, lo, hi = [], [], [], [], []
        for r, row in enumerate(m.rows):
            for coef, name in row.terms:
                data.append(coef)
                ri.append(r)
                ci.append(index[name])
            lo.append(row.rhs if row.sense == "=" else -np.inf)
            hi.append(row.rhs)
        a = sparse.csc_array((data, (ri, ci)), shape=(len(m.rows), n))
        cons = [optimize.LinearConstraint(a, lo, hi)]
    res = optimize.milp(c=np.zeros(n), constraints=cons,
                        integrality=integrality,
                        bounds=optimize.Bounds(lb, ub))
    # scipy milp status: 0 optimal, 2 infeasible
    if res.status == 0:
        status = "optimal"
    elif res.status == 2:
        status = "infeasible"
    else:
        status = f"unknown ({res.message})"
    with open(sys.argv[2], "w") as fh:
        fh.write(f"status: {status}\n")
        if res.x is not None:
            for name, i in index.items():
                fh.write(f"{name} {float(res.x[i])!r}\n")
    print(status)
    return 0


if __name__ == "__main__":
    sys.exit(main())
