#!/usr/bin/env python3
"""Scan prime intervals for moment deviations and exceptional fractions.

For each interval [Q, Q + delta] this reruns the per-prime experiment:
sample counts g(q) and window lengths h(q) come from growth schedules,
the 2r-th and (2r-1)-th moment deviations are computed for every prime,
and a prime is exceptional when |deviation| >= g(q)^(-1/8).  The table
shows how the exceptional fraction and the mean squared deviation
(raw and scale-free) fall as Q grows.

Usage:
    python3 scripts/deviation_scan.py
    python3 scripts/deviation_scan.py --starts 100000 1000000 --delta 5000 \\
        --g log_power:3 --h const:5 --rmax 2
"""

import argparse

from charwin import IntervalSpec, exceptional_sets, growth_schedule


def parse_schedule(text: str):
    kind, _, rest = text.partition(":")
    if kind == "table":
        pairs = tuple(
            (int(point), float(value))
            for point, _, value in (tok.partition("=") for tok in rest.split(","))
        )
        return growth_schedule(kind, *pairs)
    params = tuple(float(tok) for tok in rest.split(":") if tok) if rest else ()
    return growth_schedule(kind, *params)


def run(starts, delta, g_text, h_text, r_max):
    g_sched = parse_schedule(g_text)
    h_sched = parse_schedule(h_text)
    print(f"g = {g_text}, h = {h_text}, r <= {r_max}, threshold g^(-1/8)")
    header = (f"{'Q':>10} {'primes':>7} {'frac_even':>10} {'frac_odd':>9} "
              f"{'frac_any':>9} {'dev2_even':>11} {'dev2_norm':>11}")
    print(header)
    print("-" * len(header))
    for q_start in starts:
        spec = IntervalSpec(q_start=q_start, delta=delta)
        report = exceptional_sets(spec, g_sched, h_sched, r_max=r_max)
        key = f"r{r_max}_even"
        print(f"{q_start:>10} {report.prime_count:>7} {report.fraction_even:>10.4f} "
              f"{report.fraction_odd:>9.4f} {report.fraction_union:>9.4f} "
              f"{report.mean_sq_deviation[key]:>11.5f} "
              f"{report.mean_sq_deviation_normalized[key]:>11.7f}")
        for note in report.warnings:
            print(f"   note: {note}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--starts", type=int, nargs="+",
                        default=[10**4, 10**5, 10**6],
                        help="left endpoints Q of the prime intervals")
    parser.add_argument("--delta", type=int, default=10**4, help="interval width")
    parser.add_argument("--g", default="log_power:3",
                        help="sample-count schedule, e.g. log_power:3 or const:500")
    parser.add_argument("--h", default="const:5", help="window-length schedule")
    parser.add_argument("--rmax", type=int, default=1, help="highest moment order r")
    args = parser.parse_args()
    run(args.starts, args.delta, args.g, args.h, args.rmax)


if __name__ == "__main__":
    main()
