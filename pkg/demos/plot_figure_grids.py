"""
Discrete and continuous ground states side by side
==================================================

Computes W(n) for 2j = 24 exactly, samples the canonical oscillator's
Wigner function on (-4, 4)^2, and writes both as PGM images with relative
gray levels.  If matplotlib is installed a combined PNG is drawn as well.
"""

from pathlib import Path

import numpy as np

from discrete_wigner import GridExport, sample_canonical_grid, su2, wigner_matrix

out = Path("demo_output")
out.mkdir(exist_ok=True)
model = su2(24)

grids = {}
for n in (0, 1, 2):
    W = wigner_matrix(model, n)
    discrete = GridExport.from_wigner(W, "su2", 24)
    canonical = sample_canonical_grid(n)
    discrete.write(out / f"discrete_n{n}.pgm")
    canonical.write(out / f"canonical_n{n}.pgm")
    grids[n] = (W.as_float(), np.asarray(canonical.w))
    print(f"n={n}: discrete min {grids[n][0].min():+.4f}, canonical min {grids[n][1].min():+.4f}")

###############################################################################
# Optional figure.  Rows of each array run over p, so p goes on the vertical
# axis with its largest value on top, matching the PGM files.

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(3, 2, figsize=(7, 10))
    for n, (d, c) in grids.items():
        axes[n, 0].imshow(d[::-1], extent=(-12.5, 12.5, -12.5, 12.5), cmap="gray")
        axes[n, 1].imshow(c[::-1], extent=(-4, 4, -4, 4), cmap="gray")
        axes[n, 0].set_ylabel(f"n = {n}\np")
    axes[2, 0].set_xlabel("q")
    axes[2, 1].set_xlabel("q")
    fig.tight_layout()
    fig.savefig(out / "wigner_grids.png", dpi=120)
    print("wrote", out / "wigner_grids.png")
