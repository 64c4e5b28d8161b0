"""Wall time of each distance algorithm on edited pairs of growing size.

``zs`` and ``klein`` are exact; ``bounded`` is run at the edit budget used to
build the pair; ``auto`` doubles its bound until the answer is exact.  Each
row also checks that every algorithm returns the same distance.

    python3 scripts/compare_algorithms.py --sizes 50 100 200 400 --edits 4
"""
import argparse
import time

from treedist import gen_edited_pair, ted_auto, ted_bounded, ted_klein, ted_zs


def timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--edits", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--klein-max-n", type=int, default=400)
    args = ap.parse_args()

    t1, t2, _ = gen_edited_pair(0, 20, 2)
    ted_klein(t1, t2), ted_bounded(t1, t2, 2)  # JIT warm-up

    print(f"{'n':>6} {'d':>4} {'zs':>9} {'klein':>9} {'bounded':>9} {'auto':>9}  agree")
    for n in args.sizes:
        t1, t2, _ = gen_edited_pair(args.seed, n, min(args.edits, n - 1))
        d_zs, s_zs = timed(ted_zs, t1, t2)
        if n <= args.klein_max_n:
            d_kl, s_kl = timed(ted_klein, t1, t2)
            klein = f"{s_kl:9.3f}"
        else:
            d_kl, klein = d_zs, f"{'-':>9}"
        res, s_b = timed(ted_bounded, t1, t2, args.edits)
        d_auto, s_auto = timed(ted_auto, t1, t2)
        agree = len({d_zs, d_kl, d_auto} | ({res.distance} if res.distance is not None else set())) == 1
        print(f"{n:6d} {d_zs:4d} {s_zs:9.3f} {klein} {s_b:9.3f} {s_auto:9.3f}  {agree}")


if __name__ == "__main__":
    main()
