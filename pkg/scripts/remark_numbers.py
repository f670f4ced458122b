"""Print the worked numbers: bias bound, fixed-n interval, and the T1/CLT width ratio."""

import math

from mcmcci import (PolyErgodicityCert, bias_bound_t4, clt_reference_interval, interval_t1,
                    interval_t2, width_ratio)


def main():
    bb = bias_bound_t4(PolyErgodicityCert(m=0.75, M_x=2.0, D=5.0), n=100)
    ci = interval_t2(0.0, 100, 0.05, math.sqrt(4.0), bb.C)
    print(f"bias bound C      = {bb.C:.6f}")
    print(f"delta             = {ci.extras['delta']:.6f}")
    print(f"a_n               = {ci.half_width_upper:.6f}")
    print(f"a_n, delta -> 0.74 = {2 / (math.sqrt(5) * (1 - 0.74)):.6f}")

    t1 = interval_t1(0.0, 1, 0.05, 1.0, epsilon=0.001)
    clt = clt_reference_interval(0.0, 1, 0.05, 1.0)
    print(f"T1 half-width     = {t1.half_width_upper:.6f}  (B = 1, n = 1)")
    print(f"CLT half-width    = {clt.half_width_upper:.6f}")
    print(f"width ratio       = {width_ratio(t1, clt):.6f}")


if __name__ == "__main__":
    main()
