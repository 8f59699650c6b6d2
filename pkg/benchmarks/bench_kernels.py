"""Compiled kernels vs the numpy fallback.

    python benchmarks/bench_kernels.py [--planes N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from atiyah_sasaki import kernels
from atiyah_sasaki.base_geometry import SpaceForm, SymmetricSpace
from atiyah_sasaki.kernels import _fallback
from atiyah_sasaki.sphere_bundle import AtiyahBundle, SphereBundleModel, normalize_batch, sample_planes


def cases():
    yield "S^2 atiyah", SphereBundleModel(SpaceForm(2, 1.0), AtiyahBundle(1.0), 1.0, [1, 0, 0])
    yield "S^4 atiyah", SphereBundleModel(SpaceForm(4, 1.0), AtiyahBundle(0.7), 1.0, np.eye(10)[0])
    yield "CP^2 atiyah", SphereBundleModel(SymmetricSpace.complex_projective(2), AtiyahBundle(0.5), 1.0, np.eye(10)[0])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--planes", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"compiled backend available: {kernels._core is not None}")
    rng = np.random.default_rng(0)
    print(f"{'case':<14}{'kernel':<24}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}{'max diff':>11}")
    for name, M in cases():
        R, S, D, r, a = M.float_tables
        X, al, Y, be = normalize_batch(M, *sample_planes(M, args.planes, rng))
        xi = rng.standard_normal((args.planes, M.m))
        have = kernels._core is not None
        # the dispatcher makes inputs contiguous before calling the compiled core
        jobs = {
            "sectional_batch": ((R, S, D, r, a, X, al, Y, be), _fallback.sectional_batch,
                                kernels.sectional_batch if have else None),
            "curvature_apply_batch": ((S, X, Y, xi), _fallback.curvature_apply_batch,
                                      kernels.curvature_apply_batch if have else None),
        }
        for kname, (inp, slow, fast) in jobs.items():
            ts = min(timeit.repeat(lambda: slow(*inp), number=1, repeat=args.repeat)) * 1e3
            if fast is None:
                print(f"{name:<14}{kname:<24}{ts:>12.2f}{'-':>13}")
                continue
            tf = min(timeit.repeat(lambda: fast(*inp), number=1, repeat=args.repeat)) * 1e3
            diff = float(np.max(np.abs(np.asarray(slow(*inp)) - np.asarray(fast(*inp)))))
            print(f"{name:<14}{kname:<24}{ts:>12.2f}{tf:>13.2f}{ts / tf:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
