"""Command line: inspect, sample, count, estimate, verify.

Output is line oriented: one ``#`` metadata header, then one object or one
``key value`` pair per line, floats with 17 significant digits.  Runs are
bit-stable for a fixed command line: randomness is keyed by (seed, stream)
and workers merge in stream order.  Exit codes: 2 usage, 3 bad data,
4 budget exceeded, 5 numeric failure, 1 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .bundle import MonoidBundle
from .errors import ParameterOutOfRange, TracegenError
from .estimate import Moments, accumulate_moments, builtin_cost, report_from_moments
from .monoid import DEFAULT_CLIQUE_CAP
from .oracle import enumerate_Mk
from .sampling import (
    RNG_ALGORITHM,
    DEFAULT_REJECT_BUDGET,
    RandomSource,
    sample_subuniform_trace,
    sample_uniform_traces,
    topped_prefix_batch,
)
from .traces import trace_line
from .verify import verification_report

ENV_CLIQUE_CAP = "TRACEGEN_CLIQUE_CAP"


def _f17(x):
    return format(float(x), ".17g")


def _f18(x):
    return format(float(x), ".18g")


def _clique_cap():
    raw = os.environ.get(ENV_CLIQUE_CAP)
    return int(raw) if raw else DEFAULT_CLIQUE_CAP


def _bundle(ns):
    return MonoidBundle.from_file(ns.monoid, clique_cap=_clique_cap())


def _split_counts(n, jobs):
    jobs = max(1, jobs)
    base, extra = divmod(n, jobs)
    return [base + (1 if w < extra else 0) for w in range(jobs)]


def _run_workers(worker, arg_list, jobs):
    if jobs <= 1 or len(arg_list) <= 1:
        return [worker(a) for a in arg_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, arg_list))


# -- info ----------------------------------------------------------------------

def cmd_info(ns):
    bundle = _bundle(ns)
    print(f"# tracegen info monoid={ns.monoid}")
    print("letters " + " ".join(bundle.pair.letters))
    comps = bundle.components
    print(f"components {len(comps)}")
    for ci, cb in enumerate(comps):
        print(f"component {ci} letters=" + ",".join(cb.pair.letters) + f" p0={_f18(cb.p0)}")
    print(f"cliques {len(bundle.family)}")
    print("mobius " + " ".join(str(c) for c in bundle.mu.coefficients))
    print(f"p0 {_f18(bundle.p0)}")
    table = bundle.growth(ns.k)
    for k in range(ns.k + 1):
        print(f"lambda {k} {table[k]}")
    return 0


# -- sample ----------------------------------------------------------------------

def _prefix_lines(bundle, masks_rows):
    letters = bundle.pair.letters_of_mask
    return [
        json.dumps([letters(int(m)) for m in row], separators=(",", ":"))
        for row in masks_rows
    ]


def _sample_worker(args):
    (path, cap, mode, k, p, count, seed, stream, max_rejects) = args
    bundle = MonoidBundle.from_file(path, clique_cap=cap)
    rng = RandomSource(seed, stream).generator()
    if count == 0:
        return []
    if mode == "boundary":
        rows = topped_prefix_batch(bundle, k, count, rng)
        return _prefix_lines(bundle, rows)
    if mode == "subuniform":
        return [trace_line(sample_subuniform_trace(bundle, p, rng)) for _ in range(count)]
    traces, _ = sample_uniform_traces(bundle, k, count, rng, max_rejects=max_rejects)
    return [trace_line(t) for t in traces]


def cmd_sample(ns):
    bundle = _bundle(ns)
    mode = ns.mode
    k = ns.k
    p = ns.p
    if mode in ("boundary", "exact-k") and k is None:
        raise UsageError(f"mode {mode} needs --k")
    if mode == "boundary":
        p = bundle.p0
    elif mode == "subuniform":
        if p is None:
            raise UsageError("mode subuniform needs --p")
        if not 0.0 < p < bundle.p0 * (1.0 - 1e-12):
            raise ParameterOutOfRange(
                f"subuniform sampling needs 0 < p < p0 = {_f17(bundle.p0)}"
            )
    else:
        p = bundle.optimal_parameter(k) if k > 0 else 0.0

    header = (
        f"# tracegen sample mode={mode} monoid={ns.monoid} k={k if k is not None else '-'}"
        f" p={_f17(p)} n={ns.n} seed={ns.seed} jobs={ns.jobs} rng={RNG_ALGORITHM}"
    )
    if mode == "exact-k" and k > 0:
        header += f" expected_acceptance={_f17(bundle.expected_acceptance(k, p))}"
    print(header)
    counts = _split_counts(ns.n, ns.jobs)
    args = [
        (ns.monoid, _clique_cap(), mode, k, p, counts[w], ns.seed, w, ns.max_rejects)
        for w in range(len(counts))
        if counts[w] > 0
    ]
    for lines in _run_workers(_sample_worker, args, ns.jobs):
        for line in lines:
            print(line)
    return 0


# -- count -----------------------------------------------------------------------

def cmd_count(ns):
    bundle = _bundle(ns)
    k = ns.k
    print(f"# tracegen count monoid={ns.monoid} k={k} seed={ns.seed} n={ns.n} jobs={ns.jobs}")
    print(f"lambda {k} {bundle.lambda_k(k)}")
    if ns.exact:
        print(f"lambda_oracle {k} {len(enumerate_Mk(bundle.family, k))}")
    if ns.mc:
        moments = _merged_moments(ns, "one")
        report = report_from_moments(moments, k, bundle.p0)
        print(f"lambda_mc {k} {_f17(report.lambda_hat)}")
        print(f"lambda_mc_se {k} {_f17(report.lambda_hat_se)}")
    return 0


# -- estimate ---------------------------------------------------------------------

def _estimate_worker(args):
    (path, cap, k, phi_name, count, seed, stream) = args
    bundle = MonoidBundle.from_file(path, clique_cap=cap)
    phi = builtin_cost(phi_name, bundle.pair)
    rng = RandomSource(seed, stream).generator()
    m = accumulate_moments(bundle, k, phi, count, rng)
    return (m.n, m.s_phi, m.s_theta, m.s_phi2, m.s_theta2, m.s_cross)


def _merged_moments(ns, phi_name):
    counts = _split_counts(ns.n, ns.jobs)
    args = [
        (ns.monoid, _clique_cap(), ns.k, phi_name, counts[w], ns.seed, w)
        for w in range(len(counts))
        if counts[w] > 0
    ]
    merged = Moments()
    for tup in _run_workers(_estimate_worker, args, ns.jobs):
        merged.merge(Moments(*tup))
    return merged


def cmd_estimate(ns):
    bundle = _bundle(ns)
    builtin_cost(ns.phi, bundle.pair)  # validate the name before spawning work
    print(
        f"# tracegen estimate monoid={ns.monoid} k={ns.k} phi={ns.phi} n={ns.n}"
        f" seed={ns.seed} jobs={ns.jobs} rng={RNG_ALGORITHM}"
    )
    if not bundle.irreducible:
        print("# warning reducible monoid: divisor counts are unbounded in expectation")
    moments = _merged_moments(ns, ns.phi)
    report = report_from_moments(moments, ns.k, bundle.p0)
    print(f"estimate {_f17(report.estimate)}")
    print(f"se {_f17(report.standard_error)}")
    print(f"n {report.sample_count}")
    print(f"phibar_mean {_f17(report.phibar_mean)}")
    print(f"theta_mean {_f17(report.theta_mean)}")
    print(f"lambda_hat {_f17(report.lambda_hat)}")
    print(f"lambda_hat_se {_f17(report.lambda_hat_se)}")
    if ns.k <= ns.lambda_limit:
        lam = bundle.lambda_k(ns.k)
        norm = bundle.p0 ** ns.k * lam
        print(f"lambda_exact {lam}")
        print(f"estimate_exact_norm {_f17(report.phibar_mean / norm)}")
        se = report.phibar_sd / (report.sample_count ** 0.5) / norm
        print(f"se_exact_norm {_f17(se)}")
    return 0


# -- verify -----------------------------------------------------------------------

def cmd_verify(ns):
    bundle = _bundle(ns)
    print(f"# tracegen verify monoid={ns.monoid}")
    checks = verification_report(bundle)
    failed = False
    for c in checks:
        status = "ok" if c.ok else "FAIL"
        print(f"check {c.name} {_f17(c.value)} tol {_f17(c.tolerance)} {status}")
        failed |= not c.ok
    print(f"result {'fail' if failed else 'ok'}")
    return 1 if failed else 0


# -- plumbing ----------------------------------------------------------------------

class UsageError(Exception):
    pass


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tracegen",
        description="Exact counting and random generation for trace monoids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--monoid", required=True, help="monoid spec file (JSON)")

    p = sub.add_parser("info", help="alphabet, components, clique polynomial, counts")
    common(p)
    p.add_argument("--k", type=int, default=10, help="print counts up to this length")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("sample", help="random traces or boundary prefixes")
    common(p)
    p.add_argument("--mode", choices=["boundary", "subuniform", "exact-k"], required=True)
    p.add_argument("--k", type=int, default=None, help="prefix height / target length")
    p.add_argument("--p", type=float, default=None, help="parameter for subuniform mode")
    p.add_argument("--n", type=int, default=1, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-rejects", type=int, default=DEFAULT_REJECT_BUDGET)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="exact and Monte-Carlo counts of length-k traces")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="cross-check by enumeration")
    p.add_argument("--mc", action="store_true", help="add a Monte-Carlo estimate")
    p.add_argument("--n", type=int, default=10000, help="samples for --mc")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("estimate", help="uniform average of a cost over length-k traces")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument(
        "--phi",
        default="height",
        help="height | first-layer | one | prefix:<serialized trace>",
    )
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--lambda-limit", type=int, default=10000,
                   help="report the exact count when k is at most this")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="recompute the chain identities and report")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TracegenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
