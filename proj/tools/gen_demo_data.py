#!/usr/bin/env python3
"""Writes the demo scenes and surveys under data/demo. Output is deterministic."""

import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "demo"


def write(name, text):
    path = OUT / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def ground_obj(half, z=0.0, material="ground"):
    return (
        "mtllib ground.mtl\n"
        f"v {-half} {-half} {z}\nv {half} {-half} {z}\nv {half} {half} {z}\nv {-half} {half} {z}\n"
        f"usemtl {material}\nf 1 2 3 4\n"
    )


MTL = """newmtl ground
Kd 0.3 0.3 0.3
isGround true
classification 2

newmtl wall
Kd 0.6 0.6 0.6
classification 6

newmtl roof
Kd 0.2 0.2 0.2
classification 6
"""


def tree_vox():
    res = 0.5
    nx, ny, nz = 16, 16, 24
    lo = (-4.0, -4.0, 0.0)
    lines = [
        "# plant area density of a single tree",
        f"min_corner: {lo[0]} {lo[1]} {lo[2]}",
        f"max_corner: {lo[0] + nx * res} {lo[1] + ny * res} {lo[2] + nz * res}",
        f"split: {nx} {ny} {nz}",
    ]
    rng = random.Random(7)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                x = lo[0] + (i + 0.5) * res
                y = lo[1] + (j + 0.5) * res
                z = lo[2] + (k + 0.5) * res
                crown = ((x / 3.5) ** 2 + (y / 3.5) ** 2 + ((z - 7.5) / 3.5) ** 2) <= 1.0
                trunk = abs(x) < 0.3 and abs(y) < 0.3 and z < 5.0
                if trunk:
                    lines.append(f"{i} {j} {k} 6.0")
                elif crown:
                    lines.append(f"{i} {j} {k} {0.4 + 1.6 * rng.random():.3f}")
    return "\n".join(lines) + "\n"


def dem():
    n = 101
    cs = 2.0
    rows = [f"ncols {n}", f"nrows {n}", "xllcorner -101.0", "yllcorner -101.0", f"cellsize {cs}", "NODATA_value -9999"]
    for r in range(n):
        y = -100.0 + (n - 1 - r) * cs
        vals = []
        for c in range(n):
            x = -100.0 + c * cs
            h = 4.0 * math.sin(x / 25.0) * math.cos(y / 30.0) + 0.02 * x
            if 40 <= r <= 42 and 60 <= c <= 62:
                vals.append("-9999")
            else:
                vals.append(f"{h:.3f}")
        rows.append(" ".join(vals))
    return "\n".join(rows) + "\n"


def prisms_obj():
    v = []
    f = []

    def box(x0, y0, x1, y1, h):
        base = len(v)
        for z in (0.0, h):
            v.extend([(x0, y0, z), (x1, y0, z), (x1, y1, z), (x0, y1, z)])
        f.append(("wall", [base + 1, base + 2, base + 6, base + 5]))
        f.append(("wall", [base + 2, base + 3, base + 7, base + 6]))
        f.append(("wall", [base + 3, base + 4, base + 8, base + 7]))
        f.append(("wall", [base + 4, base + 1, base + 5, base + 8]))
        f.append(("roof", [base + 5, base + 6, base + 7, base + 8]))

    for i in range(8):
        x0 = -40.0 + i * 10.0
        box(x0, 6.0, x0 + 7.0, 12.0, 6.0 + 2.0 * (i % 3))
        box(x0 + 2.0, -12.0, x0 + 9.0, -6.0, 5.0 + 1.5 * ((i + 1) % 3))
    out = ["mtllib ground.mtl"]
    out += [f"v {x} {y} {z}" for x, y, z in v]
    current = None
    for mat, idx in f:
        if mat != current:
            out.append(f"usemtl {mat}")
            current = mat
        out.append("f " + " ".join(str(i) for i in idx))
    return "\n".join(out) + "\n"


def hedge_xyz():
    rng = random.Random(11)
    lines = ["# x y z nx ny nz r g b"]
    for _ in range(20000):
        x = rng.uniform(-30.0, 30.0)
        z = rng.uniform(0.0, 1.5)
        y = 4.5 + 0.05 * rng.gauss(0.0, 1.0)
        g = rng.randint(90, 160)
        lines.append(f"{x:.4f} {y:.4f} {z:.4f} 0 -1 0 40 {g} 30")
    return "\n".join(lines) + "\n"


SCANNERS = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <!-- Terrestrial scanner: vertical profile (mount turns nadir to horizontal), head sweeps azimuth. -->
  <scanner id="tls" name="Demo TLS" pulseFreq_hz="20000" beamDivergence_rad="0.0003" wavelength_nm="1550"
           pulseLength_ns="4" peakPower="1" rangeError_m="0.002" receiverDiameter_m="0.05"
           atmosphericEfficiency="0.9" maxReturns="4" beamSampleQuality="3"
           deflector="rotatingPolygon" scanFreq_hz="50" scanAngleMax_deg="40"
           headRotatePerSec_deg="60" headRotateStart_deg="-30" headRotateStop_deg="30">
    <mount><rotation><rot axis="x" angle_deg="90"/></rotation></mount>
  </scanner>
  <scanner id="als_oscillating" name="Demo ALS oscillating mirror" pulseFreq_hz="10000" beamDivergence_rad="0.0005"
           wavelength_nm="1064" pulseLength_ns="4" rangeError_m="0.02" receiverDiameter_m="0.15" maxReturns="5"
           beamSampleQuality="2" deflector="oscillating" scanFreq_hz="40" scanAngleMax_deg="25"/>
  <scanner id="als_palmer" name="Demo ALS Palmer" pulseFreq_hz="10000" beamDivergence_rad="0.0005"
           wavelength_nm="1064" pulseLength_ns="4" rangeError_m="0.02" receiverDiameter_m="0.15" maxReturns="5"
           beamSampleQuality="2" deflector="palmer" scanFreq_hz="20" palmerOffNadir_deg="15"/>
  <!-- Mobile profiler looking sideways: the scan plane is across the driving direction. -->
  <scanner id="mls" name="Demo MLS profiler" pulseFreq_hz="100000" beamDivergence_rad="0.0003"
           wavelength_nm="1550" pulseLength_ns="3" rangeError_m="0.005" receiverDiameter_m="0.05" maxReturns="3"
           beamSampleQuality="1" deflector="rotatingPolygon" scanFreq_hz="100" scanAngleMax_deg="85">
    <mount><rotation><rot axis="x" angle_deg="90"/></rotation></mount>
  </scanner>
</document>
"""

PLATFORMS = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <platform id="tripod" name="Tripod" type="static"/>
  <platform id="copter" name="Multicopter" type="multicopter" maxAccel_mps2="2" turnMode="smooth" bankLimit_deg="30"/>
  <platform id="copter_stop" name="Multicopter, stop and turn" type="multicopter" maxAccel_mps2="2" turnMode="turnOnSpot"
            yawRate_degps="90"/>
  <platform id="aircraft" name="Aircraft" type="linearPath"/>
  <platform id="car" name="Car" type="groundVehicle" maxTurnRadius_m="6" mountHeight_m="2"/>
</document>
"""

TLS_SCENE = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <scene id="tree" name="Voxel tree on flat ground">
    <part id="ground" type="obj" file="ground.obj"/>
    <part id="tree" type="vox" file="tree.vox" mode="transmissive" lad="spherical"/>
  </scene>
  <scene id="tree_scaled" name="Scaled opaque voxel tree">
    <part id="ground" type="obj" file="ground.obj"/>
    <part id="tree" type="vox" file="tree.vox" mode="scaled" alpha="0.5" randomShift="true"/>
  </scene>
</document>
"""

TLS_SURVEY = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <survey name="tls_tree" scanner="../scanners.xml#tls" platform="../platforms.xml#tripod" scene="scene.xml#tree"
          seed="42" trajectoryInterval_s="0.1" binWidth_ns="0.25" maxFullwaveRange_ns="100">
    <leg position="0 -12 1.5" startYaw_deg="0"/>
  </survey>
</document>
"""

ALS_SCENE = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <scene id="terrain" name="Hilly terrain from a height raster">
    <part id="dem" type="raster" file="dem.asc">
      <material name="terrain" reflectance="0.35" isGround="true" classification="2"/>
    </part>
  </scene>
</document>
"""

ALS_SURVEY = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <survey name="als_terrain" scanner="../scanners.xml#als_oscillating" platform="../platforms.xml#copter"
          scene="scene.xml#terrain" seed="7" trajectoryInterval_s="0.5">
    <leg position="-60 -60 60" speed_mps="10"/>
    <leg position="60 -60 60" speed_mps="10"/>
    <leg position="60 60 60" speed_mps="10" pulseFreq_hz="5000"/>
    <leg position="-60 60 60"/>
  </survey>
</document>
"""

MLS_SCENE = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <scene id="street" name="Street with prism buildings">
    <part id="ground" type="obj" file="ground.obj"/>
    <part id="buildings" type="obj" file="prisms.obj"/>
    <part id="hedge" type="xyz" file="hedge.xyz" voxelSize="0.25" normalMode="estimate" incidence="normal">
      <material name="hedge" reflectance="0.4" classification="4"/>
    </part>
  </scene>
</document>
"""

MLS_SURVEY = """<?xml version="1.0" encoding="UTF-8"?>
<document>
  <survey name="mls_street" scanner="../scanners.xml#mls" platform="../platforms.xml#car" scene="scene.xml#street"
          seed="3" trajectoryInterval_s="0.1">
    <leg position="-45 0 0" speed_mps="5"/>
    <leg position="5 0 0"/>
  </survey>
</document>
"""


def main():
    write("scanners.xml", SCANNERS)
    write("platforms.xml", PLATFORMS)
    for sub, half in (("tls", 30.0), ("mls", 60.0)):
        write(f"{sub}/ground.obj", ground_obj(half))
        write(f"{sub}/ground.mtl", MTL)
    write("tls/tree.vox", tree_vox())
    write("tls/scene.xml", TLS_SCENE)
    write("tls/survey.xml", TLS_SURVEY)
    write("als/dem.asc", dem())
    write("als/scene.xml", ALS_SCENE)
    write("als/survey.xml", ALS_SURVEY)
    write("mls/prisms.obj", prisms_obj())
    write("mls/hedge.xyz", hedge_xyz())
    write("mls/scene.xml", MLS_SCENE)
    write("mls/survey.xml", MLS_SURVEY)


if __name__ == "__main__":
    main()
