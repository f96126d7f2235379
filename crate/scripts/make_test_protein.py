"""Generate the bundled synthetic test protein (heavy atoms only).

The fixture is a bundle of eight ideal alpha helices carrying the hen egg-white
lysozyme sequence, one helix per chain. Side chains are built as unbranched
zig-zag chains of the residue's heavy atoms. The geometry is not meant to be
chemically faithful; it only needs realistic size, density and element mix for
pipeline tests. Output is deterministic.

usage: python3 scripts/make_test_protein.py > crates/core/data/lysozyme_like.pdb
"""

import math
import sys

import numpy as np

SEQ = (
    "KVFGRCELAAAMKRHGLDNYRGYSLGNWVCAAKFESNFNTQATNRNTDGSTDYGILQINSRWWCNDGRTPGSRNLCN"
    "IPCSALLSSDITASVNCAKKIVSDGNGMNAWVAWRNRCKGTDVQAWIRGCRL"
)
THREE = {
    "A": "ALA", "R": "ARG", "N": "ASN", "D": "ASP", "C": "CYS", "Q": "GLN", "E": "GLU",
    "G": "GLY", "H": "HIS", "I": "ILE", "L": "LEU", "K": "LYS", "M": "MET", "F": "PHE",
    "P": "PRO", "S": "SER", "T": "THR", "W": "TRP", "Y": "TYR", "V": "VAL",
}
SIDE = {
    "ALA": [], "GLY": None,
    "ARG": ["CG", "CD", "NE", "CZ", "NH1", "NH2"],
    "ASN": ["CG", "OD1", "ND2"], "ASP": ["CG", "OD1", "OD2"], "CYS": ["SG"],
    "GLN": ["CG", "CD", "OE1", "NE2"], "GLU": ["CG", "CD", "OE1", "OE2"],
    "HIS": ["CG", "ND1", "CD2", "CE1", "NE2"], "ILE": ["CG1", "CG2", "CD1"],
    "LEU": ["CG", "CD1", "CD2"], "LYS": ["CG", "CD", "CE", "NZ"],
    "MET": ["CG", "SD", "CE"], "PHE": ["CG", "CD1", "CD2", "CE1", "CE2", "CZ"],
    "PRO": ["CG", "CD"], "SER": ["OG"], "THR": ["OG1", "CG2"],
    "TRP": ["CG", "CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"],
    "TYR": ["CG", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"], "VAL": ["CG1", "CG2"],
}
BOND = {("C", "C"): 1.53, ("C", "N"): 1.47, ("C", "O"): 1.43, ("C", "S"): 1.81, ("S", "C"): 1.81}


def element(name):
    return name[0]


def place(a, b, c, bond, angle, torsion):
    """NeRF: place d bonded to c with angle b-c-d and torsion a-b-c-d (degrees)."""
    angle, torsion = math.radians(angle), math.radians(torsion)
    bc = c - b
    bc /= np.linalg.norm(bc)
    n = np.cross(b - a, bc)
    n /= np.linalg.norm(n)
    m = np.cross(n, bc)
    d2 = np.array([
        -bond * math.cos(angle),
        bond * math.sin(angle) * math.cos(torsion),
        bond * math.sin(angle) * math.sin(torsion),
    ])
    return c + d2[0] * bc + d2[1] * m + d2[2] * n


def backbone(seq):
    """Backbone N, CA, C, O (and CB) of an ideal alpha helix."""
    res_atoms = []
    n = np.array([0.0, 0.0, 0.0])
    ca = np.array([1.458, 0.0, 0.0])
    c = place(np.array([0.0, 1.0, 0.0]), n, ca, 1.525, 111.2, -60.0)
    phi, psi = -57.0, -47.0
    for i, res in enumerate(seq):
        if i > 0:
            pn, pca, pc = res_atoms[-1]["N"], res_atoms[-1]["CA"], res_atoms[-1]["C"]
            n = place(pn, pca, pc, 1.329, 116.2, psi)
            ca = place(pca, pc, n, 1.458, 121.7, 180.0)
            c = place(pc, n, ca, 1.525, 111.2, phi)
        atoms = {"N": n, "CA": ca, "C": c}
        if SIDE[res] is not None:
            atoms["CB"] = place(c, n, ca, 1.53, 110.5, -122.5)
        res_atoms.append(atoms)
    for i, atoms in enumerate(res_atoms):
        n_, ca_, c_ = atoms["N"], atoms["CA"], atoms["C"]
        if i + 1 < len(seq):
            atoms["O"] = place(res_atoms[i + 1]["N"], ca_, c_, 1.231, 120.5, 180.0)
        else:
            atoms["O"] = place(n_, ca_, c_, 1.231, 120.5, 0.0)
            atoms["OXT"] = place(n_, ca_, c_, 1.25, 117.0, 180.0)
    return res_atoms


def grow_side_chains(chains):
    """Greedy zig-zag side chains, choosing torsions that avoid placed atoms."""
    placed = [p for ch in chains for _, _, atoms in ch for p in atoms.values()]
    for ch in chains:
        for res, i, atoms in ch:
            side = SIDE[res]
            if not side:
                continue
            chain = [atoms["N"], atoms["CA"], atoms["CB"]]
            for name in side:
                best, best_d = None, -1.0
                for tors in (180.0, -60.0, 60.0, 150.0, -150.0, 90.0, -90.0, 120.0, -120.0):
                    pos = place(chain[-3], chain[-2], chain[-1], 1.40, 114.0, tors)
                    others = np.array(placed)
                    dist = np.linalg.norm(others - pos, axis=1)
                    skip = np.zeros(len(others), dtype=bool)
                    for q in chain[-2:]:
                        skip |= np.all(np.abs(others - q) < 1e-9, axis=1)
                    dist = dist[~skip]
                    clearance = min(dist.min() if len(dist) else 99.0, 3.2)
                    # among clash-free torsions prefer the one closest to the bundle axis
                    score = clearance * 100.0 - np.linalg.norm(pos[:2])
                    if score > best_d:
                        best, best_d = pos, score
                chain.append(best)
                atoms[name] = best
                placed.append(best)


def align_axis(res_atoms, reverse, spin):
    """Rigid transform putting the helix axis on z, then spin and optionally flip."""
    ca = np.array([a["CA"] for a in res_atoms])
    center = ca.mean(axis=0)
    _, _, vt = np.linalg.svd(ca - center)
    axis = vt[0]
    if np.dot(ca[-1] - ca[0], axis) < 0:
        axis = -axis
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(axis, z)
    s, cth = np.linalg.norm(v), np.dot(axis, z)
    if s < 1e-12:
        rot = np.eye(3)
    else:
        vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
        rot = np.eye(3) + vx + vx @ vx * ((1 - cth) / s**2)
    ang = math.radians(spin)
    rz = np.array([[math.cos(ang), -math.sin(ang), 0], [math.sin(ang), math.cos(ang), 0], [0, 0, 1]])
    flip = np.array([1.0, -1.0, -1.0]) if reverse else np.ones(3)

    def tf(p):
        return ((rz @ (rot @ (p - center)))) * flip

    return tf


def main():
    nchains = 8
    seqs = []
    per = len(SEQ) // nchains
    start = 0
    for k in range(nchains):
        end = start + per + (1 if k < len(SEQ) % nchains else 0)
        seqs.append([THREE[x] for x in SEQ[start:end]])
        start = end
    spacing = float(sys.argv[1]) if len(sys.argv) > 1 else 15.0
    grid = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]
    chains = []
    for k, seq in enumerate(seqs):
        bb = backbone(seq)
        tf = align_axis(bb, reverse=(k % 2 == 1), spin=37.0 * k)
        gx, gy = grid[k]
        shift = np.array([gx * spacing, gy * spacing, 0.0])
        chains.append([(res, i, {n: tf(p) + shift for n, p in a.items()}) for i, (res, a) in enumerate(zip(seq, bb))])
    grow_side_chains(chains)
    order = ["N", "CA", "C", "O", "CB"]
    records = []
    resseq = 1
    for k, ch in enumerate(chains):
        chain = chr(ord("A") + k)
        for res, i, atoms in ch:
            names = [n for n in order if n in atoms] + (SIDE[res] or [])
            if "OXT" in atoms:
                names.append("OXT")
            for name in names:
                records.append((name, res, chain, resseq + i, atoms[name]))
        resseq += len(ch)
    coords = np.array([r[4] for r in records])
    # inter-chain clash check
    chains = np.array([r[2] for r in records])
    d = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=-1)
    mask = chains[:, None] != chains[None, :]
    mind = d[mask].min()
    # pairs closer than the bond rule but not meant to be bonded, within a chain
    np.fill_diagonal(d, 99.0)
    close = int(((d > 1.75) & (d < 2.2)).sum() // 2)
    print(f"min inter-chain distance {mind:.3f} A, close pairs {close}, atoms {len(records)}", file=sys.stderr)
    if mind < 3.0:
        sys.exit("clash")
    out = sys.stdout
    out.write("HEADER    SYNTHETIC TEST PROTEIN\n")
    out.write("TITLE     EIGHT-HELIX BUNDLE WITH LYSOZYME C SEQUENCE (HEAVY ATOMS)\n")
    out.write("REMARK   1 GENERATED BY scripts/make_test_protein.py\n")
    serial = 1
    prev_chain = records[0][2]
    for name, res, chain, rs, p in records:
        if chain != prev_chain:
            out.write(f"TER   {serial:5d}\n")
            serial += 1
            prev_chain = chain
        aname = f" {name:<3s}" if len(name) < 4 else name
        out.write(
            f"ATOM  {serial:5d} {aname:4s} {res:3s} {chain}{rs:4d}    "
            f"{p[0]:8.3f}{p[1]:8.3f}{p[2]:8.3f}{1.0:6.2f}{0.0:6.2f}          {element(name):>2s}\n"
        )
        serial += 1
    out.write(f"TER   {serial:5d}\nEND\n")


if __name__ == "__main__":
    main()
