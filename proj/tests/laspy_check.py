"""Reads a simulated LAS file with laspy and compares it with the ASCII output of the same run."""

import subprocess
import sys
import tempfile
from pathlib import Path

from cli_fixture import write_fixture

try:
    import laspy
    import numpy as np
except ImportError:
    print("laspy or numpy not installed; skipping")
    sys.exit(77)


def main(vls: str) -> int:
    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)
        survey = write_fixture(d)
        for flags, out in (([], "ascii"), (["--lasOutput"], "las")):
            r = subprocess.run([vls, "run", str(survey), "--deterministic", *flags, "--output", str(d / out)],
                               capture_output=True, text=True, timeout=300)
            if r.returncode != 0:
                print(r.stderr)
                return 1
        ascii_pts = np.loadtxt(d / "ascii" / "points.xyz", comments="#", ndmin=2)
        las = laspy.read(d / "las" / "points.las")
        errors = []
        if str(las.header.version) != "1.0":
            errors.append(f"version {las.header.version}")
        if las.header.point_format.id != 1:
            errors.append(f"point format {las.header.point_format.id}")
        if len(las.points) != len(ascii_pts):
            errors.append(f"{len(las.points)} LAS points vs {len(ascii_pts)} ASCII rows")
        else:
            xyz = np.column_stack([las.x, las.y, las.z])
            worst = np.max(np.abs(xyz - ascii_pts[:, :3]))
            # Half a 0.1 mm step plus the 9-significant-digit rounding of the text file.
            if worst > 0.5e-4 + 1e-6:
                errors.append(f"coordinate difference {worst}")
            if not np.array_equal(np.asarray(las.return_number), ascii_pts[:, 4].astype(int)):
                errors.append("return numbers differ")
            if not np.array_equal(np.asarray(las.classification), ascii_pts[:, 9].astype(int)):
                errors.append("classifications differ")
            if not np.allclose(np.asarray(las.gps_time), ascii_pts[:, 6], rtol=1e-8, atol=1e-9):
                errors.append("gps times differ")
            mins, maxs = np.asarray(las.header.mins), np.asarray(las.header.maxs)
            if not (np.all(xyz.min(axis=0) == mins) and np.all(xyz.max(axis=0) == maxs)):
                errors.append(f"header bounds {mins} {maxs} vs data {xyz.min(axis=0)} {xyz.max(axis=0)}")
        for e in errors:
            print("FAIL:", e)
        print(f"{len(ascii_pts)} points compared")
        return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
