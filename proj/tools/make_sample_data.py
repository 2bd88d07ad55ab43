#!/usr/bin/env python3
"""Write the small sample inputs under data/ (deterministic, seed fixed)."""

import math
import random
import sys
from pathlib import Path


def pdb_line(serial, name, resname, resseq, xyz_nm, element):
    x, y, z = (10.0 * c for c in xyz_nm)  # PDB coordinates are in Angstrom
    return (
        f"ATOM  {serial:5d} {name:<4s} {resname:>3s} A{resseq:4d}    "
        f"{x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{0.0:6.2f}          {element:>2s}"
    )


def shell_points(rng, n, inner, outer, min_sep):
    pts = []
    while len(pts) < n:
        v = [rng.gauss(0.0, 1.0) for _ in range(3)]
        norm = math.sqrt(sum(c * c for c in v))
        r = rng.uniform(inner, outer)
        p = [c / norm * r for c in v]
        if all(math.dist(p, q) >= min_sep for q in pts):
            pts.append(p)
    return pts


def receptor(rng, n=300):
    elements = ["C", "C", "C", "N", "O"]
    lines = ["HEADER    SYNTHETIC RECEPTOR SHELL"]
    for i, p in enumerate(shell_points(rng, n, 1.0, 2.0, 0.28)):
        el = elements[i % len(elements)]
        lines.append(pdb_line(i + 1, el, "REC", i // 10 + 1, p, el))
    lines += ["TER", "END"]
    return "\n".join(lines) + "\n"


def ligand(rng, n=12):
    elements = ["C", "C", "C", "O", "N", "C"]
    lines = ["HEADER    SYNTHETIC LIGAND"]
    for i, p in enumerate(shell_points(rng, n, 0.0, 0.35, 0.14)):
        el = elements[i % len(elements)]
        lines.append(pdb_line(i + 1, f"{el}{i + 1}", "LIG", 1, p, el))
    lines.append("END")
    return "\n".join(lines) + "\n"


def argon(per_side=4, box=2.2):
    a = box / per_side
    rows = [f"{per_side ** 3}", f"argon lattice box={box}"]
    for i in range(per_side):
        for j in range(per_side):
            for k in range(per_side):
                rows.append(f"Ar {(i + 0.5) * a:.6f} {(j + 0.5) * a:.6f} {(k + 0.5) * a:.6f}")
    return "\n".join(rows) + "\n"


PARAMS = """\
# element.field = value, or @atomname.field = value
# units: amu, e, nm, kJ/mol
C.charge = 0.1
N.charge = -0.2
O.charge = -0.2
@C1.charge = 0.15
"""


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(42)
    (out / "receptor.pdb").write_text(receptor(rng))
    (out / "ligand.pdb").write_text(ligand(rng))
    (out / "argon64.xyz").write_text(argon())
    (out / "params.txt").write_text(PARAMS)


if __name__ == "__main__":
    main()
