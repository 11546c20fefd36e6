"""Generate the shipped standard electrode position tables.

Positions follow the idealized proportional placement of the 10-20/10-10
system on a unit sphere, in the frame with +x toward the right
preauricular point, +y toward the nasion, and +z toward the vertex.
The outer ring (Fpz-T7-Oz-T8) lies on the equator and Cz at the vertex,
matching the common plotting convention for spherical layouts; nasion,
inion and the preauricular points then sit 22.5 deg below the equator,
so the nasion-inion and ear-to-ear arcs each span 225 deg.

Electrodes are placed at the usual fractions of three reference arcs
(sagittal midline, central coronal, outer ring); the remaining rows are
spaced at eighths along the circle through their two ring endpoints and
their midline electrode.

Run from the repository root:

    python3 tools/make_standard_positions.py

Output is written to src/chanadapt/data/ and committed; the package
loads montages from those CSV files, never from this script.
"""

from __future__ import annotations

import os

import numpy as np

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "chanadapt", "data")

ARC_SPAN = 225.0  # degrees swept by the nasion-inion / ear-to-ear arcs
ARC_OFFSET = -22.5  # elevation of the arc endpoints


def midline(f: float) -> np.ndarray:
    """Point at fraction f of the nasion -> inion arc (through Cz)."""
    a = np.deg2rad(ARC_OFFSET + ARC_SPAN * f)
    return np.array([0.0, np.cos(a), np.sin(a)])


def coronal(f: float) -> np.ndarray:
    """Point at fraction f of the left-ear -> right-ear arc (through Cz)."""
    a = np.deg2rad(ARC_OFFSET + ARC_SPAN * f)
    return np.array([-np.cos(a), 0.0, np.sin(a)])


def ring(deg: float) -> np.ndarray:
    """Point on the equatorial ring; azimuth from nasion, positive to the left."""
    phi = np.deg2rad(deg)
    return np.array([-np.sin(phi), np.cos(phi), 0.0])


def arc_point(left: np.ndarray, mid: np.ndarray, right: np.ndarray, f: float) -> np.ndarray:
    """Fraction f along the spherical circle left -> mid -> right."""
    n = np.cross(mid - left, right - left)
    n /= np.linalg.norm(n)
    center = n * float(np.dot(n, left))
    e1 = left - center
    rho = np.linalg.norm(e1)
    e1 /= rho
    e2 = np.cross(n, e1)
    ang_mid = np.arctan2(np.dot(mid - center, e2), np.dot(mid - center, e1))
    if ang_mid < 0:
        e2, ang_mid = -e2, -ang_mid
    ang_right = np.arctan2(np.dot(right - center, e2), np.dot(right - center, e1))
    if ang_right < 0:
        ang_right += 2 * np.pi
    a = f * ang_right
    return center + rho * (np.cos(a) * e1 + np.sin(a) * e2)


def build_positions() -> dict[str, np.ndarray]:
    pos: dict[str, np.ndarray] = {}
    for name, f in [("Fpz", 0.1), ("AFz", 0.2), ("Fz", 0.3), ("FCz", 0.4), ("Cz", 0.5),
                    ("CPz", 0.6), ("Pz", 0.7), ("POz", 0.8), ("Oz", 0.9), ("Iz", 1.0)]:
        pos[name] = midline(f)
    for name, f in [("T9", 0.0), ("T7", 0.1), ("C5", 0.2), ("C3", 0.3), ("C1", 0.4),
                    ("C2", 0.6), ("C4", 0.7), ("C6", 0.8), ("T8", 0.9), ("T10", 1.0)]:
        pos[name] = coronal(f)
    for name, deg in [("Fp1", 18), ("AF7", 36), ("F7", 54), ("FT7", 72), ("TP7", 108),
                      ("P7", 126), ("PO7", 144), ("O1", 162),
                      ("Fp2", -18), ("AF8", -36), ("F8", -54), ("FT8", -72), ("TP8", -108),
                      ("P8", -126), ("PO8", -144), ("O2", -162)]:
        pos[name] = ring(deg)
    eighths = {"5": 1, "3": 2, "1": 3, "2": 5, "4": 6, "6": 7}
    rows = [("AF7", "AFz", "AF8", "AF"), ("F7", "Fz", "F8", "F"),
            ("FT7", "FCz", "FT8", "FC"), ("TP7", "CPz", "TP8", "CP"),
            ("P7", "Pz", "P8", "P"), ("PO7", "POz", "PO8", "PO")]
    for ln, mn, rn, prefix in rows:
        for digit, k in eighths.items():
            pos[prefix + digit] = arc_point(pos[ln], pos[mn], pos[rn], k / 8)
    # Earlobe electrodes have no proportional definition; approximate them at
    # the 0%/100% points of the coronal arc (22.5 deg below the ears' ring).
    pos["A1"] = coronal(0.0)
    pos["A2"] = coronal(1.0)
    return pos


MONTAGES = {
    # 19-channel 10-20 layout
    "ten_twenty_19": [
        "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T7", "C3", "Cz", "C4",
        "T8", "P7", "P3", "Pz", "P4", "P8", "O1", "O2",
    ],
    # 64-channel 10-10 layout in BCI2000 channel order
    "ten_ten_64": [
        "FC5", "FC3", "FC1", "FCz", "FC2", "FC4", "FC6",
        "C5", "C3", "C1", "Cz", "C2", "C4", "C6",
        "CP5", "CP3", "CP1", "CPz", "CP2", "CP4", "CP6",
        "Fp1", "Fpz", "Fp2", "AF7", "AF3", "AFz", "AF4", "AF8",
        "F7", "F5", "F3", "F1", "Fz", "F2", "F4", "F6", "F8",
        "FT7", "FT8", "T7", "T8", "T9", "T10", "TP7", "TP8",
        "P7", "P5", "P3", "P1", "Pz", "P2", "P4", "P6", "P8",
        "PO7", "PO3", "POz", "PO4", "PO8", "O1", "Oz", "O2", "Iz",
    ],
    # 22-channel motor-imagery cap layout
    "bci2a_22": [
        "Fz", "FC3", "FC1", "FCz", "FC2", "FC4",
        "C5", "C3", "C1", "Cz", "C2", "C4", "C6",
        "CP3", "CP1", "CPz", "CP2", "CP4",
        "P1", "Pz", "P2", "POz",
    ],
    # 21-channel clinical layout with legacy temporal names and earlobes
    "tuev_21": [
        "Fp1", "Fp2", "F3", "F4", "C3", "C4", "P3", "P4", "O1", "O2",
        "F7", "F8", "T3", "T4", "T5", "T6", "A1", "A2", "Fz", "Cz", "Pz",
    ],
}

# Legacy temporal-row names map onto the modern 10-10 positions.
ALIASES = {"T3": "T7", "T4": "T8", "T5": "P7", "T6": "P8"}


def main() -> None:
    pos = build_positions()
    os.makedirs(OUT_DIR, exist_ok=True)
    for name, labels in MONTAGES.items():
        path = os.path.join(OUT_DIR, name + ".csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {name}: idealized unit-sphere positions\n")
            fh.write("# frame: +x right preauricular, +y nasion, +z vertex\n")
            fh.write("label,x,y,z\n")
            for label in labels:
                p = pos[ALIASES.get(label, label)]
                p = p / np.linalg.norm(p)
                x, y, z = (float(v) for v in p)
                fh.write(f"{label},{x!r},{y!r},{z!r}\n")
        print(f"wrote {path} ({len(labels)} electrodes)")


if __name__ == "__main__":
    main()
