"""Compiled kernels vs the numpy fallback, on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each row reports the best-of-N wall time for both backends and checks the
outputs agree bit for bit.
"""

import time
from contextlib import contextmanager

import click
import numpy as np

from folnertile import _pykernels, kernels
from folnertile.foelner import FolnerSequence
from folnertile.group import FiniteGroupSet
from folnertile.scales import IndexScales
from folnertile.tiler import run_cascade
from folnertile.vitali import vitali_cover

try:
    from folnertile import _ckernels
except ImportError:  # no compiler at install time
    _ckernels = None


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


@contextmanager
def backend(impl):
    saved = kernels._impl
    kernels._impl = impl
    try:
        yield
    finally:
        kernels._impl = saved


def greedy_inputs(rng, n_cells, n_seeds, width):
    seed_cells = rng.choice(np.arange(width, n_cells - width), n_seeds, replace=False).astype(np.int64)
    seed_slot = rng.integers(0, 4, n_seeds).astype(np.int64)
    spans = [np.arange(-w, w + 1, dtype=np.int64) for w in (width // 4, width // 3, width // 2, width)]
    diff_ptr = np.cumsum([0] + [len(s) for s in spans]).astype(np.int64)
    return seed_cells, seed_slot, diff_ptr, np.concatenate(spans), n_cells


def cases(scale, rng):
    n = int(200_000 * scale)
    sc, slot, ptr, offs, cells = greedy_inputs(rng, n, n // 4, 40)

    def greedy(impl):
        return lambda: impl.greedy_select(sc, slot, ptr, offs, np.zeros(cells, dtype=np.uint8))

    mask = (rng.random(n) < 0.5).astype(np.uint8)
    hoffs = np.arange(64, dtype=np.int64)
    hcells = np.arange(n - 64, dtype=np.int64)

    def hits(impl):
        return lambda: impl.hit_counts(mask, hoffs, hcells)

    coords = rng.integers(-10 ** 6, 10 ** 6, size=(n * 5, 2)).astype(np.int64)

    def mix(impl):
        return lambda: impl.mix64(12345, coords)

    Z2 = FolnerSequence.box(2)
    pts = {tuple(p) for p in rng.integers(0, int(300 * scale ** 0.5), size=(int(6000 * scale), 2))}
    S = FiniteGroupSet(sorted(pts), dim=2)
    table = {p: int(s) for p, s in zip(sorted(pts), rng.integers(1, 9, len(pts)))}

    def cover(impl):
        def run():
            with backend(impl):
                res = vitali_cover(S, table, Z2, 4)
            return np.asarray([t.center.coords for t in res.tiles])
        return run

    Z1 = FolnerSequence.box(1)

    def cascade(impl):
        def run():
            with backend(impl):
                _, state, _ = run_cascade(0.5, 2, Z1, IndexScales())
            return state.cell_pass
        return run

    return [
        (f"greedy_select ({n // 4} seeds)", greedy),
        (f"hit_counts ({len(hcells)} cells x 64)", hits),
        (f"mix64 ({len(coords)} rows)", mix),
        (f"vitali_cover d=2 ({len(S)} points)", cover),
        ("run_cascade d=1 eps=0.5", cascade),
    ]


@click.command()
@click.option("--repeat", default=5, show_default=True, help="Timings per case; the best is kept.")
@click.option("--scale", default=1.0, show_default=True, help="Multiplier on input sizes.")
@click.option("--seed", default=0, show_default=True)
def main(repeat, scale, seed):
    if _ckernels is None:
        raise click.ClickException("compiled kernels are not built; reinstall with Cython available")
    rng = np.random.default_rng(seed)
    click.echo(f"{'case':<40} {'cython':>10} {'numpy':>10} {'speedup':>8}  same")
    for name, make in cases(scale, rng):
        tc, oc = best_of(make(_ckernels), repeat)
        tp, op = best_of(make(_pykernels), repeat)
        same = np.array_equal(np.asarray(oc), np.asarray(op))
        click.echo(f"{name:<40} {tc * 1e3:>8.2f}ms {tp * 1e3:>8.2f}ms {tp / tc:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
