"""Command-line interface: one subcommand per library capability.

Every subcommand is deterministic given its flags and seed (QGRASS_SEED
overrides the default seed).  Output is JSON by default, CSV for the
table-shaped commands with --format csv; exact integers are serialized as
decimal strings, never floats.  Output is buffered and written whole, so
a failing run never leaves a partial file.
"""

import argparse
import json
import math
import os
import sys
from collections import Counter
from fractions import Fraction

from . import aep, entropy, gf, grassproc, maxent, qcomb, qdist

SCHEMA = "qgrass/1"
BASIS_PRINT_LIMIT = 64


class CliError(Exception):
    def __init__(self, code, detail):
        super().__init__(detail)
        self.code = code
        self.detail = detail


def _default_seed():
    env = os.environ.get("QGRASS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError("bad_seed", f"QGRASS_SEED={env!r} is not an integer")
    return 0


def _emit(text, out_path):
    if out_path:
        tmp = out_path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    else:
        sys.stdout.write(text)


def _json(payload):
    return json.dumps(payload) + "\n"


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def _theta_value(text):
    """Parse theta, keeping exact rationals exact (e.g. '1', '1/2')."""
    if "/" in text:
        return Fraction(text)
    f = float(text)
    if f == int(f):
        return int(f)
    return f


# -- subcommand handlers ---------------------------------------------------

def _cmd_qcoeff(args):
    n = args.n
    ks = args.k
    if len(ks) == 1:
        parts = (ks[0], n - ks[0])
        if parts[1] < 0:
            raise CliError("domain", f"k={ks[0]} exceeds n={n}")
    else:
        if sum(ks) != n:
            raise CliError("domain", f"parts {ks} do not sum to n={n}")
        parts = tuple(ks)
    try:
        value = qcomb.q_multinomial(parts, args.q)
    except ValueError as exc:
        raise CliError("domain", str(exc))
    return str(value) + "\n"


def _cmd_simulate(args):
    field = _field(args.q)
    theta = _theta_value(args.theta)
    if args.samples < 1:
        raise CliError("domain", f"samples must be >= 1, got {args.samples}")
    if args.histogram:
        counts = Counter()
        for i in range(args.samples):
            traj = grassproc.simulate(args.n, float(theta), field, f"{args.seed}:{i}")
            counts[traj.final.current.dim] += 1
        params = qdist.QBinomialParams(args.n, float(theta), args.q)
        exact = [qdist.pmf(k, params) for k in range(args.n + 1)]
        empirical = [counts.get(k, 0) / args.samples for k in range(args.n + 1)]
        tv = 0.5 * sum(abs(a - b) for a, b in zip(empirical, exact))
        payload = {
            "schema": SCHEMA,
            "n": args.n,
            "theta": float(theta),
            "q": args.q,
            "seed": args.seed,
            "samples": args.samples,
            "dim_counts": [counts.get(k, 0) for k in range(args.n + 1)],
            "exact_dim_pmf": exact,
            "tv": tv,
        }
        if args.format == "csv":
            rows = [
                (k, counts.get(k, 0), empirical[k], exact[k])
                for k in range(args.n + 1)
            ]
            return _csv(("dim", "count", "empirical", "exact"), rows)
        return _json(payload)

    if args.n > BASIS_PRINT_LIMIT:
        raise CliError(
            "basis_print_guard",
            f"n={args.n} exceeds the basis-printing guard {BASIS_PRINT_LIMIT}; "
            "use --histogram",
        )
    lines = []
    for i in range(args.samples):
        traj = grassproc.simulate(
            args.n, float(theta), field, f"{args.seed}:{i}", keep_history=args.keep_history
        )
        lines.append(json.dumps(grassproc.trajectory_record(traj)))
    return "\n".join(lines) + "\n"


def _cmd_mu_table(args):
    theta = _theta_value(args.theta)
    table = aep.build_mu_table(float(theta), args.q)
    if args.format == "csv":
        rows = [(d, v) for d, v in enumerate(table.values)]
        return _csv(("d", "mu"), rows)
    return _json(
        {
            "schema": SCHEMA,
            "q": args.q,
            "theta": float(theta),
            "mu": list(table.values),
            "tail": table.tail_bound,
            "d_max": table.d_max,
        }
    )


def _cmd_typical(args):
    theta = _theta_value(args.theta)
    ts = aep.typical_set(args.n, args.epsilon, theta, args.q)
    return _json(
        {
            "schema": SCHEMA,
            "n": ts.n,
            "epsilon": ts.epsilon,
            "theta": ts.theta,
            "q": ts.q,
            "delta_codim": ts.delta_codim,
            "exact_size": str(ts.exact_size),
            "limit_delta": ts.limit_delta,
            "discontinuity": ts.discontinuity,
            "bracket": list(ts.bracket),
        }
    )


def _cmd_aep_check(args):
    theta = _theta_value(args.theta)
    report = aep.check_aep(args.n, args.epsilon, args.delta, theta, args.q)
    report = dict(report, schema=SCHEMA)
    return _json(report)


def _cmd_code_encode(args):
    field = _field(args.q)
    theta = _theta_value(args.theta)
    ts = aep.typical_set(args.n, args.epsilon, theta, args.q)
    code = aep.make_block_code(ts, field)
    try:
        v, canonical = gf.parse_subspace(args.subspace, args.n, field)
    except ValueError as exc:
        raise CliError("bad_subspace", str(exc))
    word = aep.encode(v, code)
    return _json(
        {
            "schema": SCHEMA,
            "word": word,
            "typical": args.n - v.dim <= code.codim_bound,
            "input_was_canonical": canonical,
            "codeword_len": code.codeword_len,
        }
    )


def _cmd_code_decode(args):
    field = _field(args.q)
    theta = _theta_value(args.theta)
    ts = aep.typical_set(args.n, args.epsilon, theta, args.q)
    code = aep.make_block_code(ts, field)
    try:
        v = aep.decode(args.word, code)
    except ValueError as exc:
        raise CliError("bad_word", str(exc))
    return _json(
        {
            "schema": SCHEMA,
            "subspace": gf.format_subspace(v),
            "dim": v.dim,
            "codeword_len": code.codeword_len,
        }
    )


def _cmd_mle(args):
    if args.samples_file:
        with open(args.samples_file) as fh:
            raw = fh.read()
    else:
        raw = sys.stdin.read()
    try:
        samples = [int(line) for line in raw.split() if line.strip()]
    except ValueError as exc:
        raise CliError("bad_samples", str(exc))
    if not samples:
        raise CliError("bad_samples", "no samples provided")
    try:
        theta_hat = qdist.mle_theta(samples, args.n, args.q, args.tol)
    except ValueError as exc:
        raise CliError("domain", str(exc))
    ybar = sum(samples) / len(samples)
    if theta_hat == math.inf:
        residual = abs(args.n - ybar)
        theta_out = "infinite"
    else:
        residual = abs(qdist.m_qn(theta_hat, args.n, args.q) - ybar)
        theta_out = theta_hat
    return _json(
        {
            "schema": SCHEMA,
            "theta_hat": theta_out,
            "m_residual": residual,
            "samples": len(samples),
        }
    )


def _cmd_maxent(args):
    energies = [float(t) for t in args.energies.split(",")]
    try:
        model = maxent.EnergyModel(tuple(energies), args.mean)
        sol = maxent.solve(model)
    except ValueError as exc:
        raise CliError("domain", str(exc))
    payload = {
        "schema": SCHEMA,
        "probs": list(sol.probs),
        "multipliers": list(sol.multipliers),
        "support": list(sol.active_support),
    }
    if args.finite_n:
        payload["finite_n"] = _finite_n_payload(model, args.finite_n, args.q)
    return _json(payload)


def _finite_n_payload(model, n, q):
    report = maxent.finite_n_check(model, n, q)
    return {
        "nominal": list(report["nominal"]),
        "argmax": [list(k) for k in report["argmax"]],
        "ties": report["ties"],
        "nominal_is_optimal": report["nominal_is_optimal"],
        "growth_rate": report["growth_rate"],
        "h2_continuous": report["h2_continuous"],
    }


def _cmd_asymptotics(args):
    probs = [float(t) for t in args.probs.split(",")]
    n_list = [int(t) for t in args.n_list.split(",")]
    try:
        if args.q:
            rows = entropy.check_qmultinomial_asymptotics(probs, args.q, n_list)
        else:
            rows = entropy.check_multinomial_asymptotics(probs, n_list)
    except ValueError as exc:
        raise CliError("domain", str(exc))
    if args.format == "csv":
        return _csv(("n", "rate", "target"), rows)
    return _json(
        {
            "schema": SCHEMA,
            "q": args.q,
            "rows": [{"n": n, "rate": r, "target": t} for n, r, t in rows],
        }
    )


def _cmd_growth(args):
    n_list = [int(t) for t in args.n_list.split(",")]
    rows = aep.grassmannian_growth(n_list, args.q)
    if args.format == "csv":
        return _csv(("n", "value"), rows)
    return _json(
        {
            "schema": SCHEMA,
            "q": args.q,
            "rows": [{"n": n, "value": v} for n, v in rows],
            "limit": 0.5,
        }
    )


def _field(q):
    try:
        return gf.FieldSpec(q)
    except ValueError as exc:
        raise CliError("domain", str(exc))


# -- parser ----------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(
        prog="qgrass",
        description="q-deformed information theory over finite vector spaces",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seed=False, fmt=True):
        if seed:
            p.add_argument("--seed", type=int, default=None)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write output to this path")

    p = sub.add_parser("qcoeff", help="exact q-multinomial coefficient")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int, nargs="+")
    p.add_argument("--q", type=int, required=True)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_qcoeff)

    p = sub.add_parser(
        "simulate",
        help="run the Grassmannian process",
        epilog="CSV columns (histogram mode): dim,count,empirical,exact",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--histogram", action="store_true",
                   help="aggregate dimension histogram + TV against the exact pmf")
    p.add_argument("--keep-history", action="store_true")
    common(p, seed=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "mu-table",
        help="limiting codimension law mu(d)",
        epilog="CSV columns: d,mu",
    )
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--theta", required=True)
    common(p)
    p.set_defaults(func=_cmd_mu_table)

    p = sub.add_parser("typical", help="typical subspace set descriptor")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--q", type=int, required=True)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_typical)

    p = sub.add_parser("aep-check", help="equipartition gap report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--q", type=int, required=True)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_aep_check)

    p = sub.add_parser("code-encode", help="encode a typical subspace")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--subspace", required=True, help="RREF rows, e.g. '100;010'")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_code_encode)

    p = sub.add_parser("code-decode", help="decode a codeword to a subspace")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--word", required=True)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_code_decode)

    p = sub.add_parser("mle", help="estimate theta from dimension samples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tol", type=float, default=qdist.MLE_DEFAULT_TOL)
    p.add_argument("--samples-file", default=None,
                   help="one integer per line; default reads stdin")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_mle)

    p = sub.add_parser("maxent", help="quadratic-entropy maximization")
    p.add_argument("--energies", required=True, help="comma-separated energies")
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--finite-n", type=int, default=None)
    p.add_argument("--q", type=int, default=2)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_maxent)

    p = sub.add_parser(
        "asymptotics",
        help="growth-rate table vs entropy target",
        epilog="CSV columns: n,rate,target",
    )
    p.add_argument("--probs", required=True, help="comma-separated probabilities")
    p.add_argument("--n-list", required=True)
    p.add_argument("--q", type=int, default=None,
                   help="q-multinomial rates; omit for classical")
    common(p)
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser(
        "growth",
        help="total Grassmannian growth rates",
        epilog="CSV columns: n,value",
    )
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-list", required=True)
    common(p)
    p.set_defaults(func=_cmd_growth)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        text = args.func(args)
        _emit(text, args.out)
        return 0
    except CliError as exc:
        sys.stderr.write(_json({"error": exc.code, "detail": exc.detail}))
        return 1
    except ValueError as exc:
        sys.stderr.write(_json({"error": "domain", "detail": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
