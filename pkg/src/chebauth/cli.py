"""Command-line benchmarks and protocol simulation.

Subcommands:
  bench-cheb      evaluation time vs. degree bit-length at a fixed modulus
  bench-protocol  per-party login+auth timings and operation counts
  report-sizes    per-message and total public-channel bits
  simulate        run scenario files through the adversarial harness

Exit codes: 0 success, 2 flag errors, 3 assertion failures (for example an
operation-count mismatch).
"""

import argparse
import sys

from . import bench, harness

EXIT_FLAG_ERROR = 2
EXIT_ASSERTION = 3


def _parse_bits_list(text):
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _emit(rows, args, plot_spec=None):
    print(bench.format_table(rows))
    if getattr(args, "csv", None):
        with open(args.csv, "w", newline="") as handle:
            bench.write_csv(rows, handle)
        print(f"csv written to {args.csv}", file=sys.stderr)
    if getattr(args, "plot", None):
        if plot_spec is None:
            raise SystemExit("this subcommand has no figure output")
        bench.plot_rows(rows, args.plot, *plot_spec)
        print(f"figure written to {args.plot}", file=sys.stderr)


def build_parser():
    parser = argparse.ArgumentParser(prog="chebauth", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench-cheb", help="evaluation scaling over degree bit-lengths")
    p.add_argument("--bits", type=_parse_bits_list, default=[128, 160, 256, 512],
                   help="comma-separated degree bit-lengths")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--modulus-bits", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--plot", metavar="PATH", help="write a PNG figure of the timings")

    p = sub.add_parser("bench-protocol", help="per-party protocol timings and op counts")
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--modulus-bits", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--plot", metavar="PATH")

    p = sub.add_parser("report-sizes", help="message payload sizes in bits")
    p.add_argument("--modulus-bits", type=int, default=256)
    p.add_argument("--hash-bits", type=int, default=160)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--plot", metavar="PATH")

    p = sub.add_parser("simulate", help="run adversarial scenarios from a file")
    p.add_argument("--scenario", required=True, metavar="FILE")
    p.add_argument("--seed", type=int, default=0, help="deployment seed")
    p.add_argument("--bits", type=int, default=64, help="modulus bits for the deployment")
    p.add_argument("--csv", metavar="PATH")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench-cheb":
            if args.iters < 1:
                parser.error("--iters must be >= 1")
            rows = bench.bench_cheb(args.bits, args.iters, args.modulus_bits, args.seed)
            _emit(rows, args, ("label", "median_ms", "Chebyshev evaluation time vs degree width"))
        elif args.command == "bench-protocol":
            if args.iters < 1:
                parser.error("--iters must be >= 1")
            rows = bench.bench_protocol(args.iters, args.modulus_bits, args.seed)
            _emit(rows, args, ("label", "median_ms", "Login+authentication time per party", "bar"))
        elif args.command == "report-sizes":
            rows = bench.report_sizes(args.modulus_bits, args.hash_bits)
            _emit(rows, args, ("label", "bits", "Public-channel payload bits", "bar"))
        elif args.command == "simulate":
            deployment = harness.build_deployment(args.seed, bits=args.bits)
            rows = harness.run_scenario_file(args.scenario, deployment)
            harness.write_outcome_csv(rows, sys.stdout)
            if args.csv:
                with open(args.csv, "w", newline="") as handle:
                    harness.write_outcome_csv(rows, handle)
    except bench.BenchAssertionError as err:
        print(f"assertion failure: {err}", file=sys.stderr)
        return EXIT_ASSERTION
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FLAG_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
