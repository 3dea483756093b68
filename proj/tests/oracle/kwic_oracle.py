"""Independent numpy oracle for the KWIC case study.

Perron vectors come from numpy.linalg.eig (not power iteration) and the
limit from a direct matrix power of the weighted supermatrix. Run once and
commit the output; the C++ tests read kwic_oracle.json.
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

RCI = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

CRIT = ["P", "F", "R", "M"]
ALTS = ["PF", "L", "BB", "ADT"]
ORDER = ["Prioritize"] + CRIT + ALTS

PRINTED = {
    1: ("Prioritize", "criteria", ["1 2 3 1/2", "1/2 1 2 1/3", "1/3 1/2 1 1/4", "2 3 4 1"]),
    2: ("P", "criteria", ["1 2 1/3", "1/2 1 1/4", "3 4 1"]),
    3: ("F", "criteria", ["1 3 1/2", "1/3 1 1/4", "2 4 1"]),
    4: ("R", "criteria", ["1 2 1/2", "1/2 1 1/3", "2 3 1"]),
    5: ("M", "criteria", ["1 2 3", "1/2 1 2", "1/3 1/2 1"]),
    6: ("P", "alternatives", ["1 9 8 3", "1/9 1 1/6 1/9", "1/8 6 1 1/6", "1/3 9 6 1"]),
    7: ("F", "alternatives", ["1 6 4 8", "1/6 1 1/3 3", "1/4 3 1 5", "1/8 1/3 1/5 1"]),
    8: ("R", "alternatives", ["1 3 5 3", "1/3 1 3 1", "1/5 1/3 1 1/3", "1/3 1 3 1"]),
    9: ("M", "alternatives", ["1 1/4 1 1/5", "4 1 4 1/2", "1 1/4 1 1/5", "5 2 5 1"]),
    10: ("PF", "criteria", ["1 2 4 8", "1/2 1 3 7", "1/4 1/3 1 5", "1/8 1/7 1/5 1"]),
    11: ("L", "criteria", ["1 1/7 1/8 1/9", "7 1 1/2 1/3", "8 2 1 1/2", "9 3 2 1"]),
    12: ("BB", "criteria", ["1 1/4 1 1", "4 1 4 4", "1 1/4 1 1", "1 1/4 1 1"]),
    13: ("ADT", "criteria", ["1 7 4 2", "1/7 1 1/4 1/6", "1/4 4 1 1/3", "1/2 6 3 1"]),
}
# upper-triangle corrections that reproduce the printed unweighted supermatrix
CORRECTED = {7: (0, 1, 5), 10: (0, 2, 3)}


def matrix(rows, fix=None):
    a = np.array([[float(Fraction(x)) for x in r.split()] for r in rows])
    if fix:
        i, j, v = fix
        a[i, j], a[j, i] = v, 1.0 / v
    return a


def perron(a):
    vals, vecs = np.linalg.eig(a)
    k = int(np.argmax(vals.real))
    w = np.abs(vecs[:, k].real)
    w = w / w.sum()
    n = a.shape[0]
    lam = float(vals[k].real)
    ci = max(0.0, (lam - n) / (n - 1)) if n > 2 else 0.0
    cr = ci / RCI[n] if RCI[n] > 0 else 0.0
    return w, lam, cr


def elements(control, cluster):
    base = CRIT if cluster == "criteria" else ALTS
    return [x for x in base if x != control]


def supermatrix(vectors, crit_to_alt_weight):
    n = len(ORDER)
    u = np.zeros((n, n))
    for k, (control, cluster, _) in PRINTED.items():
        col = ORDER.index(control)
        for e, w in zip(elements(control, cluster), vectors[k]):
            u[ORDER.index(e), col] = w
    w = u.copy()
    for c in CRIT:
        col = ORDER.index(c)
        for e in CRIT:
            w[ORDER.index(e), col] *= 1.0 - crit_to_alt_weight
        for e in ALTS:
            w[ORDER.index(e), col] *= crit_to_alt_weight
    return u, w


def main(out_path):
    result = {"matrices": {}, "scenarios": {}}
    vec_printed, vec_corrected = {}, {}
    for k, (control, cluster, rows) in PRINTED.items():
        wp, lp, crp = perron(matrix(rows))
        wc, lc, crc = perron(matrix(rows, CORRECTED.get(k)))
        vec_printed[k], vec_corrected[k] = wp, wc
        result["matrices"][str(k)] = {
            "slot": f"{control}:{cluster}",
            "printed": {"weights": wp.tolist(), "lambda_max": lp, "cr": crp},
            "corrected": {"weights": wc.tolist(), "lambda_max": lc, "cr": crc},
        }
    for name, vecs, beta in [("corrected_equal", vec_corrected, 0.5), ("printed_equal", vec_printed, 0.5),
                             ("corrected_weighted", vec_corrected, 0.2)]:
        u, w = supermatrix(vecs, beta)
        lim = np.linalg.matrix_power(w, 4096)
        column = lim[:, 0]
        alt = {a: float(column[ORDER.index(a)]) for a in ALTS}
        total = sum(alt.values())
        result["scenarios"][name] = {
            "order": ORDER,
            "unweighted": u.tolist(),
            "weighted": w.tolist(),
            "limit_column": column.tolist(),
            "ranking": sorted(ALTS, key=lambda a: (-alt[a], a)),
            "normalized": {a: alt[a] / total for a in ALTS},
        }
    Path(out_path).write_text(json.dumps(result, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("kwic_oracle.json"))
