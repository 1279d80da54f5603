#!/usr/bin/env python3
"""SDPA-format SDP feasibility solver backed by cvxopt.

Usage: sdpa_solve.py problem.dat-s solution.sol

Solves the dual side of the SDPA sparse problem, i.e. finds block-diagonal
Y >= 0 with tr(F_i Y) = c_i for i = 1..m, via the phase-1 program

    minimize t  s.t.  tr(F_i Y) = c_i,  Y_psd + t I >= 0,  Y_diag >= 0.

Writes the solution in CSDP solution format (y vector line, then
"2 blk i j val" entries for Y). Exit codes follow the CSDP convention:
0 = feasible solution written, 1 = infeasible, >=4 = solver failure.
"""
import sys

import numpy as np
from cvxopt import matrix, solvers, spmatrix

FEAS_TOL = 1e-7


def parse_sdpa(path):
    toks = []
    mline = None
    with open(path) as fh:
        lines = []
        for ln in fh:
            s = ln.strip()
            if not s or s.startswith('*') or s.startswith('"'):
                continue
            lines.append(s)
    m = int(lines[0].split()[0])
    nblocks = int(lines[1].split()[0])
    sizes = [int(t) for t in lines[2].replace(',', ' ').replace('(', ' ').replace(')', ' ').replace('{', ' ').replace('}', ' ').split()]
    assert len(sizes) == nblocks, "block structure length mismatch"
    rhs = [float(t) for t in lines[3].replace(',', ' ').replace('{', ' ').replace('}', ' ').split()]
    assert len(rhs) == m, "rhs length mismatch"
    ents = []
    for s in lines[4:]:
        t = s.split()
        ents.append((int(t[0]), int(t[1]), int(t[2]), int(t[3]), float(t[4])))
    return m, sizes, rhs, ents


def main():
    if len(sys.argv) < 3:
        print("usage: sdpa_solve.py problem.dat-s solution.sol", file=sys.stderr)
        return 4
    try:
        m, sizes, rhs, ents = parse_sdpa(sys.argv[1])
    except Exception as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 4

    psd = [(k, s) for k, s in enumerate(sizes) if s > 0]
    diag = [(k, -s) for k, s in enumerate(sizes) if s < 0]

    # variable layout: diagonal entries first (LP cone), then svec entries of
    # each PSD block, then the phase-1 scalar t.
    diag_off = {}
    n = 0
    for k, s in diag:
        diag_off[k] = n
        n += s
    psd_off = {}
    for k, s in psd:
        psd_off[k] = n
        n += s * (s + 1) // 2
    t_i = n
    n += 1

    def svec_index(k, i, j):
        # 1-based (i, j), i <= j, upper triangle row-major
        s = dict(psd)[k]
        i0, j0 = i - 1, j - 1
        return psd_off[k] + i0 * s - i0 * (i0 - 1) // 2 + (j0 - i0)

    rows = {}
    obj_ents = []
    for matno, blk, i, j, v in ents:
        k = blk - 1
        if i > j:
            i, j = j, i
        if k in diag_off:
            assert i == j, "off-diagonal entry in diagonal block"
            col, coef = diag_off[k] + i - 1, v
        else:
            col, coef = svec_index(k, i, j), (v if i == j else 2.0 * v)
        if matno == 0:
            obj_ents.append((col, coef))
        else:
            rows.setdefault(matno - 1, {})
            rows[matno - 1][col] = rows[matno - 1].get(col, 0.0) + coef

    AI, AJ, AV, b = [], [], [], []
    r = 0
    for ci in range(m):
        row = rows.get(ci, {})
        if not row:
            if abs(rhs[ci]) > 1e-12:
                print("infeasible: empty constraint with nonzero rhs", file=sys.stderr)
                return 1
            continue
        for col, coef in row.items():
            AI.append(r)
            AJ.append(col)
            AV.append(coef)
        b.append(rhs[ci])
        r += 1
    A = spmatrix(AV, AI, AJ, (r, n))
    bb = matrix(b)

    # cone: LP part for diagonal entries, PSD part per block (with +t I shift)
    nl = sum(s for _, s in diag)
    Grows = nl + sum(s * s for _, s in psd)
    GI, GJ, GV = [], [], []
    for k, s in diag:
        for d in range(s):
            GI.append(diag_off[k] + d)
            GJ.append(diag_off[k] + d)
            GV.append(-1.0)
    off = nl
    for k, s in psd:
        for i in range(s):
            for j in range(i, s):
                col = svec_index(k, i + 1, j + 1)
                GI.append(off + i * s + j)
                GJ.append(col)
                GV.append(-1.0)
                if i != j:
                    GI.append(off + j * s + i)
                    GJ.append(col)
                    GV.append(-1.0)
        for i in range(s):
            GI.append(off + i * s + i)
            GJ.append(t_i)
            GV.append(-1.0)
        off += s * s
    G = spmatrix(GV, GI, GJ, (Grows, n))
    h = matrix(np.zeros(Grows))
    c = matrix(np.zeros(n))
    c[t_i] = 1.0
    # tiny pull toward small diagonal entries keeps the free-variable split
    # (u - v) from drifting along its null direction
    for k, s in diag:
        for d in range(s):
            c[diag_off[k] + d] = 1e-9

    solvers.options['show_progress'] = False
    solvers.options['maxiters'] = 200
    try:
        sol = solvers.conelp(c, G, h, dims={'l': nl, 'q': [], 's': [s for _, s in psd]}, A=A, b=bb)
    except Exception as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4

    if sol['status'] == 'primal infeasible':
        print("infeasible (equality system has no PSD solution)", file=sys.stderr)
        return 1
    if sol['status'] != 'optimal':
        print(f"solver status: {sol['status']}", file=sys.stderr)
        return 4

    x = np.array(sol['x']).flatten()
    tstar = x[t_i]
    if tstar > FEAS_TOL:
        print(f"infeasible: phase-1 optimum t* = {tstar:.3e} > 0", file=sys.stderr)
        return 1

    y = np.zeros(m)
    yr = np.array(sol['y']).flatten()
    ri = 0
    for ci in range(m):
        if rows.get(ci):
            y[ci] = yr[ri]
            ri += 1

    with open(sys.argv[2], 'w') as fh:
        fh.write(' '.join(f"{v:.18g}" for v in y) + '\n')
        for k, s in diag:
            for d in range(s):
                v = x[diag_off[k] + d]
                if v != 0.0:
                    fh.write(f"2 {k + 1} {d + 1} {d + 1} {v:.18g}\n")
        for k, s in psd:
            for i in range(1, s + 1):
                for j in range(i, s + 1):
                    v = x[svec_index(k, i, j)]
                    if v != 0.0:
                        fh.write(f"2 {k + 1} {i} {j} {v:.18g}\n")
    return 0


if __name__ == '__main__':
    sys.exit(main())
