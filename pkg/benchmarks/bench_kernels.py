"""Time the compiled raster kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--resolution 512] [--repeat 5]
"""
import argparse
import time

import numpy as np

from continua import _kernels_py
from continua.comb import figure1_model
from continua.raster import boundary_cells, rasterize

try:
    from continua import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--resolution", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    m = figure1_model()
    scene = rasterize(m, args.resolution)
    segs = [(a, b) for a, b, _ in m.segments()]
    cells = scene.cell_coords([q for s in segs for q in s]).reshape(-1, 4)
    free = (scene.occupied == 0).astype(np.uint8)
    src = boundary_cells(scene.shape)
    src = src[free.ravel()[src] > 0]
    print(f"grid {scene.shape[0]}x{scene.shape[1]}, {len(cells)} segments")

    impls = [("python", _kernels_py)] + ([("compiled", compiled)] if compiled else [])
    rows = {}
    for name, k in impls:
        rows[name] = {
            "mark": best_of(lambda: k.mark_segments(np.zeros(scene.shape, np.uint8), cells, 1e-6), args.repeat),
            "bfs": best_of(lambda: k.bfs_distances(free, src), args.repeat),
            "label": best_of(lambda: k.label(free), args.repeat),
        }
    print(f"{'kernel':8s}" + "".join(f"{n:>12s}" for n in rows) + ("     speedup" if compiled else ""))
    for op in ("mark", "bfs", "label"):
        line = f"{op:8s}" + "".join(f"{rows[n][op] * 1e3:10.2f}ms" for n in rows)
        if compiled:
            line += f"{rows['python'][op] / rows['compiled'][op]:11.1f}x"
        print(line)
    if compiled is None:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
