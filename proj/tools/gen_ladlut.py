#!/usr/bin/env python3
"""Generate the leaf angle distribution lookup tables shipped in data/ladlut.

Each table samples g_L on a fixed grid of beam directions given by their horizontal
and vertical components (h, v) = (cos a, sin a), a = k * STEP for k = 0..62, plus the
vertical direction (0, 1). All presets share the normalisation of the erectophile
table, integral_0^1 g(v) dv = 16 / (9 pi).

The erectophile shape g(v) = 4/(3 pi) * (1 + v^2) reproduces the published erectophile
table; at v = 1 the tabulated value 0.848822 is stored as published.
"""
import math
import pathlib
import sys

STEP = 0.0251831
N_ANGLES = 63
NORM = 16.0 / (9.0 * math.pi)
H_MIN = math.sin(STEP / 2.0)


def shape(name, v):
    h2 = max(0.0, 1.0 - v * v)
    if name == "erectophile":
        return 1.0 + v * v
    if name == "planophile":
        return 1.0 + h2
    if name == "plagiophile":
        return 1.0 + 4.0 * v * v * h2
    if name == "extremophile":
        return 1.0 + (v * v - h2) ** 2
    if name == "spherical":
        return 1.0
    if name == "uniform":
        return 1.0 / max(math.sqrt(h2), H_MIN)
    raise ValueError(name)


def fit_components(h, v):
    """Six-decimal components whose squares sum to one within 1e-6."""
    vs = f"{v:.6f}"
    vr = float(vs)
    base = round(h * 1e6)
    best = min((base + d for d in (0, -1, 1)),
               key=lambda c: (abs((c / 1e6) ** 2 + vr * vr - 1.0) > 1e-6, abs(c - h * 1e6)))
    return f"{best / 1e6:.6f}", vs


def integral(name, n=200000):
    # midpoint rule, fine enough for the normalisation constant
    return sum(shape(name, (i + 0.5) / n) for i in range(n)) / n


ANALYTIC = {
    "erectophile": 4.0 / 3.0,
    "planophile": 5.0 / 3.0,
    "plagiophile": 23.0 / 15.0,
    "extremophile": 22.0 / 15.0,
    "spherical": 1.0,
}


def main(outdir):
    outdir = pathlib.Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = [(math.cos(k * STEP), math.sin(k * STEP)) for k in range(N_ANGLES)] + [(0.0, 1.0)]
    for name in ["planophile", "erectophile", "plagiophile", "extremophile", "spherical", "uniform"]:
        scale = NORM / ANALYTIC.get(name, integral(name))
        lines = [f"# leaf angle distribution: {name}", "# horizontal vertical g_L"]
        for h, v in grid:
            hs, vs = fit_components(h, v)
            hr, vr = float(hs), float(vs)
            assert abs(hr * hr + vr * vr - 1.0) <= 1e-6, (name, hs, vs)
            g = scale * shape(name, v)
            if name == "erectophile" and vr == 1.0 and hr == 0.0:
                g = 0.848822
            lines.append(f"{hs} {vs} {g:.6f}")
        (outdir / f"{name}.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/ladlut")
