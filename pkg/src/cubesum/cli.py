"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or domain error.
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import mpmath

from . import __version__
from .algebra import DomainError, EisensteinInt, PrecisionError, format_cyclotomic, is_prime

DEFAULT_PREC = 256
PREC_ENV = "CUBESUM_PREC"
DEFAULT_CACHE = os.path.join(".", "an-cache")


class VerificationReport:
    """Pass/fail record of one command; serializes to a single JSON object."""

    def __init__(self, command, inputs, prec=None):
        self.command = command
        self.inputs = inputs
        self.prec = prec
        self.checks = []
        self.result = {}
        self.wall_time = None

    def add(self, check_id, description, status, computed=None, expected=None, tolerance=None):
        if status not in ("pass", "fail", "skipped"):
            raise ValueError("bad status %r" % status)
        self.checks.append({"check_id": check_id, "description": description,
                            "status": status, "computed": _plain(computed),
                            "expected": _plain(expected), "tolerance": _plain(tolerance)})

    def extend(self, prefix, checks):
        """Import check dicts produced by the library modules."""
        for i, c in enumerate(checks, 1):
            if "identity" in c:
                status = "pass" if c["holds"] else "fail"
                self.add("%s.%d" % (prefix, i), c["identity"], status,
                         c.get("failing_entry"), None, None)
            else:
                self.add("%s.%d" % (prefix, i), c["check"], c["status"],
                         c.get("computed"), c.get("expected"), c.get("tolerance"))

    def merge(self, other):
        for c in other.checks:
            self.checks.append(dict(c, check_id="%s/%s" % (other.command, c["check_id"])))
        self.result[other.command] = other.result

    @property
    def status(self):
        return "fail" if any(c["status"] == "fail" for c in self.checks) else "pass"

    def as_dict(self, timing=False):
        d = {"command": self.command, "inputs": self.inputs, "status": self.status,
             "precision": self.prec, "version": __version__,
             "result": _plain(self.result), "checks": self.checks}
        if timing:
            d["wall_time"] = round(self.wall_time or 0.0, 3)
        return d

    def to_json(self, timing=False):
        return json.dumps(self.as_dict(timing), sort_keys=False)

    def render(self, timing=False):
        lines = ["%s %s: %s" % (self.command, _fmt_inputs(self.inputs), self.status.upper())]
        for k, v in _plain(self.result).items():
            lines.append("  %s: %s" % (k, json.dumps(v) if isinstance(v, (dict, list)) else v))
        for c in self.checks:
            extra = ""
            if c["computed"] is not None:
                extra = "  computed=%s" % (c["computed"],)
            if c["tolerance"] is not None:
                extra += " tol=%s" % (c["tolerance"],)
            lines.append("  [%s] %s %s%s" % (c["status"], c["check_id"], c["description"], extra))
        if timing:
            lines.append("  wall time: %.3f s" % (self.wall_time or 0.0))
        return "\n".join(lines)


def _fmt_inputs(inputs):
    return " ".join("--%s %s" % (k, v) for k, v in inputs.items())


def _plain(x):
    """JSON-safe copy: mpmath numbers and Fractions become strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(x, 30)
    return str(x)


def _status(ok):
    return "pass" if ok else "fail"


# ------------------------------------------------------------- commands

def cmd_hilbert(args):
    from .classfield3 import hilbert_cubic_at_3
    a, b = EisensteinInt.parse(args.a), EisensteinInt.parse(args.b)
    rep = VerificationReport("hilbert", {"a": args.a, "b": args.b})
    rep.result["value"] = format_cyclotomic(hilbert_cubic_at_3(a, b))
    return rep


def chars_tables(p):
    from .classfield3 import chi3_table, theta3_table, theta_chibar
    return {"Theta3": theta3_table().table(), "chi3": chi3_table(p).table(),
            "theta3*conj(chi3)": theta_chibar(p).table()}


def cmd_chars(args):
    from .classfield3 import (
        delta_theta_and_lambda, hilbert_cubic_at_3, lambda_omega, theta_chibar_data,
    )
    p = _prime_4_7(args.p)
    rep = VerificationReport("chars", {"p": p})
    rep.result["tables"] = chars_tables(p)
    c, alpha = theta_chibar_data(p)
    rep.result["theta3*conj(chi3) conductor"] = c
    rep.result["alpha"] = None if alpha is None else str(alpha)
    lam, d_pi, _ = delta_theta_and_lambda()
    rep.result["lambda"] = format_cyclotomic(lam)
    rep.result["Delta_theta(sqrt(-3))"] = format_cyclotomic(d_pi)
    sym = hilbert_cubic_at_3(EisensteinInt(1, 3), 3)
    rep.add("hilbert.1", "(1+3w, 3) = w^2", _status(format_cyclotomic(sym) == "w^2"),
            format_cyclotomic(sym), "w^2")
    lw = lambda_omega(p)
    k = -((p - 1) // 3) % 3
    val = format_cyclotomic(hilbert_cubic_at_3(lw, p))
    want = {0: "1", 1: "w", 2: "w^2"}[k]
    rep.add("hilbert.2", "(lambda_w, p) = w^-(p-1)/3", _status(val == want), val, want)
    rep.add("lambda.1", "lambda = -i", _status(format_cyclotomic(lam) == "-i"),
            format_cyclotomic(lam), "-i")
    return rep


def cmd_curve_info(args):
    from .curves import curve_family, global_data, torsion_subgroup
    if args.n <= 0:
        raise DomainError("n must be positive")
    g = global_data(args.n)
    tors = torsion_subgroup(curve_family(args.n))
    rep = VerificationReport("curve-info", {"n": args.n})
    rep.result.update({
        "model": "y^2 = x^3 - 432*%d^2" % args.n,
        "conductor": g["conductor"],
        "tamagawa": {str(ld.prime): ld.tamagawa for ld in g["local"]},
        "kodaira": {str(ld.prime): ld.kodaira for ld in g["local"]},
        "tamagawa_product": g["tamagawa_product"],
        "torsion": {"order": tors["order"], "structure": tors["structure"],
                    "points": [[str(P.x), str(P.y)] for P in tors["points"]]},
    })
    return rep


def cmd_modaction(args):
    from .modaction import verify_modular_action
    p = _prime_4_7(args.p)
    rep = VerificationReport("modaction", {"p": p})
    rep.extend("modaction", verify_modular_action(p))
    return rep


def cmd_local_beta(args):
    from .waldspurger import local_beta_report
    p = _prime_4_7(args.p)
    rep = VerificationReport("local-beta", {"p": p})
    r = local_beta_report(p)
    rep.result.update(r)
    want = (Fraction(1), Fraction(2)) if p % 9 == 7 else (Fraction(1, 2), Fraction(4))
    rep.add("beta.1", "beta3 closed form", _status(Fraction(r["beta3"]) == want[0]),
            r["beta3"], str(want[0]))
    rep.add("beta.2", "beta0 ratio", _status(Fraction(r["beta0_ratio"]) == want[1]),
            r["beta0_ratio"], str(want[1]))
    rep.add("beta.3", "oracle agrees", _status(r["oracle_agrees"]), r["oracle_beta3"], r["beta3"])
    rep.add("beta.4", "epsilon = +1", _status(r["epsilon"] == 1), r["epsilon"], 1)
    return rep


def cmd_waldspurger_scan(args):
    from .waldspurger import scan
    if args.trials < 1 or args.n < 1:
        raise DomainError("trials and n must be positive")
    rep = VerificationReport("waldspurger-scan",
                             {"q": args.q, "n": args.n, "trials": args.trials, "seed": args.seed})
    r = scan(args.q, args.n, args.trials, seed=args.seed)
    moduli = {}
    for rec in r["records"]:
        for v in rec["values"]:
            moduli[v] = moduli.get(v, 0) + 1
    rep.result.update({"consistent": r["consistent"], "oracle_matches": r["oracle_matches"],
                       "epsilon_minus": r["epsilon_minus"],
                       "values": dict(sorted(moduli.items()))})
    rep.add("scan.1", "test vector exists iff epsilon = +1",
            _status(r["consistent"] == args.trials), r["consistent"], args.trials)
    rep.add("scan.2", "nonzero values are 1/q^floor(l/2) or 2",
            _status(r["oracle_matches"] == args.trials), r["oracle_matches"], args.trials)
    return rep


def cmd_galois_check(args):
    from .heegner import verify_galois_relations
    p = _prime_4_7(args.p)
    rep = VerificationReport("galois-check", {"p": p}, args.prec)
    r = verify_galois_relations(p, args.prec)
    rep.result["idele_convention"] = r["idele_convention"]
    rep.result["cusp_image"] = r["cusp_image"]
    rep.extend("galois", r["checks"])
    return rep


def cmd_gz_check(args):
    from .heegner import gz_check
    p = _prime_4_7(args.p)
    rep = VerificationReport("gz-check", {"p": p}, args.prec)
    r = gz_check(p, args.prec)
    rep.extend("gz", r.pop("checks"))
    r.pop("passed", None)
    rep.result.update(r)
    return rep


def cmd_lvalue(args):
    from .heegner import lvalue, root_number
    if args.n <= 0:
        raise DomainError("n must be positive")
    rep = VerificationReport("lvalue", {"n": args.n, "order": args.order}, args.prec)
    sign = root_number(args.n)
    rep.result["root_number"] = sign
    with mpmath.workprec(args.prec):
        v = lvalue(args.n, args.order, args.prec)
        # moving the splitting point t must not change the value
        v2 = lvalue(args.n, args.order, args.prec, t=Fraction(6, 5))
        rep.result["value"] = mpmath.nstr(v, 40)
        tol = mpmath.mpf(10) ** -40
        rep.add("lvalue.1", "independent of the splitting parameter", _status(abs(v - v2) < tol),
                mpmath.nstr(abs(v - v2), 5), "0", mpmath.nstr(tol, 3))
    return rep


def cmd_bsd3(args):
    from .bsd import bsd3_report
    p = _prime_4_7(args.p)
    rep = VerificationReport("bsd3", {"p": p}, args.prec)
    r = bsd3_report(p, args.prec, heegner=p in (7, 13))
    rep.extend("bsd3", r.pop("checks"))
    r.pop("passed", None)
    rep.result.update(r)
    return rep


def cmd_all(args):
    p = _prime_4_7(args.p)
    rep = VerificationReport("all", {"p": p}, args.prec)
    ns = argparse.Namespace(**vars(args))
    ns.a, ns.b = "1+3w", "3"
    steps = [("chars", cmd_chars), ("modaction", cmd_modaction),
             ("local-beta", cmd_local_beta), ("galois-check", cmd_galois_check)]
    for name, fn in steps:
        rep.merge(fn(ns))
    for n in (p, 3 * p * p):
        ns.n = n
        sub = cmd_curve_info(ns)
        sub.command = "curve-info(%d)" % n
        rep.merge(sub)
    if p in (7, 13):
        rep.merge(cmd_gz_check(ns))
    else:
        rep.add("gz-check", "Gross-Zagier check", "skipped", None, "p in {7, 13}")
    try:
        rep.merge(cmd_bsd3(ns))
    except DomainError as e:
        rep.add("bsd3", "BSD 3-part", "skipped", str(e))
    return rep


def _prime_4_7(p):
    if not is_prime(p) or p % 9 not in (4, 7):
        raise DomainError("p must be a prime congruent to 4 or 7 mod 9")
    return p


# ---------------------------------------------------------------- parser

def _env_prec():
    v = os.environ.get(PREC_ENV)
    if not v:
        return DEFAULT_PREC
    try:
        return int(v)
    except ValueError:
        raise SystemExit("%s must be an integer" % PREC_ENV)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--timing", action="store_true", help="include wall time")
    common.add_argument("--prec", type=int, default=None,
                        help="working precision in bits (default %d, env %s)"
                        % (DEFAULT_PREC, PREC_ENV))
    common.add_argument("--cache-dir", default=DEFAULT_CACHE, help="a_n cache directory")

    parser = argparse.ArgumentParser(prog="cubesum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("hilbert", cmd_hilbert, "cubic Hilbert symbol at 3")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    add("chars", cmd_chars, "character tables at 3").add_argument("--p", type=int, required=True)
    add("curve-info", cmd_curve_info, "conductor, Tamagawa numbers, torsion").add_argument(
        "--n", type=int, required=True)
    add("modaction", cmd_modaction, "adelic matrix identities").add_argument(
        "--p", type=int, required=True)
    add("local-beta", cmd_local_beta, "local period at 3").add_argument(
        "--p", type=int, required=True)
    sp = add("waldspurger-scan", cmd_waldspurger_scan, "randomized Tunnell-Saito check")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    add("gz-check", cmd_gz_check, "Gross-Zagier check").add_argument(
        "--p", type=int, required=True)
    add("galois-check", cmd_galois_check, "Galois action on the CM point").add_argument(
        "--p", type=int, required=True)
    sp = add("lvalue", cmd_lvalue, "L(1, E_n) or L'(1, E_n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", type=int, choices=(0, 1), required=True)
    add("bsd3", cmd_bsd3, "3-part of BSD").add_argument("--p", type=int, required=True)
    add("all", cmd_all, "every per-prime check").add_argument("--p", type=int, required=True)
    return parser


def run(argv=None, out=None):
    """Parse argv, run the command, print the report; returns the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if args.prec is None:
        args.prec = _env_prec()
    if args.prec < 64:
        print(json.dumps({"command": args.command, "status": "error",
                          "error": "precision must be at least 64 bits"}), file=out)
        return 2
    from .curves import set_cache_dir
    set_cache_dir(args.cache_dir)
    t0 = time.perf_counter()
    try:
        with mpmath.workprec(args.prec):
            rep = args.func(args)
    except (DomainError, PrecisionError) as e:
        print(json.dumps({"command": args.command, "status": "error", "error": str(e)}), file=out)
        return 2
    rep.wall_time = time.perf_counter() - t0
    if rep.prec is None and args.command not in ("hilbert", "chars", "curve-info", "modaction",
                                                 "local-beta", "waldspurger-scan"):
        rep.prec = args.prec
    print(rep.render(args.timing) if args.pretty else rep.to_json(args.timing), file=out)
    return 0 if rep.status == "pass" else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
