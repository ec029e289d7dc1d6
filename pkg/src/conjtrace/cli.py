"""Command-line interface: ``conjtrace <command> ...``.

Exit status is 0 on success, 1 when a decision command answers negatively
(or a check fails), and 2 on usage errors.  ``--format jsonl`` switches
every command to versioned JSON lines; certificates are single lines that
``conjtrace verify`` accepts.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import ConjTraceError, ConjugatePair, ParseError
from .freegroup import are_conjugate, cyclic_canonical, parse_word
from .ring import LaurentPolynomial

DEFAULT_SEED = 1729
JSONL_VERSION = 1


class UsageError(Exception):
    pass


def _emit(args, human, machine):
    if args.format == "jsonl":
        if isinstance(machine, str):
            sys.stdout.write(machine if machine.endswith("\n") else machine + "\n")
        else:
            rec = {"format": f"conjtrace-{args.command}", "version": JSONL_VERSION}
            rec.update(machine)
            print(json.dumps(rec, sort_keys=True))
    else:
        print(human)


def _word(args, text):
    return parse_word(text, args.rank)


def _poly(p):
    return str(p) if isinstance(p, LaurentPolynomial) else str(p)


# -- commands -----------------------------------------------------------------

def cmd_conj(args):
    u, v = _word(args, args.u), _word(args, args.v)
    cu, _ = cyclic_canonical(u)
    cv, _ = cyclic_canonical(v)
    same = are_conjugate(u, v)
    human = (f"conjugate; class: {cu}" if same
             else f"not conjugate; classes: {cu}, {cv}")
    _emit(args, human, {"u": args.u, "v": args.v, "conjugate": same,
                        "class_u": str(cu), "class_v": str(cv)})
    return 0 if same else 1


def cmd_fricke(args):
    from .traceid.fricke import fricke
    u = _word(args, args.u)
    pu = fricke(u)
    if args.v is None:
        _emit(args, f"tr({args.u}) = {pu}", {"u": args.u, "polynomial": pu.to_data()})
        return 0
    v = _word(args, args.v)
    pv = fricke(v)
    eq, nc = pu == pv, not are_conjugate(u, v)
    yn = {True: "yes", False: "no"}
    human = f"SL2-trace equivalent: {yn[eq]}; non-conjugate: {yn[nc]}"
    if args.verbose:
        human = f"tr({args.u}) = {pu}\ntr({args.v}) = {pv}\n" + human
    _emit(args, human, {"u": args.u, "v": args.v, "equivalent": eq, "non_conjugate": nc})
    return 0 if eq else 1


def cmd_horowitz(args):
    from .traceid.horowitz import HorowitzParams, horowitz_word
    try:
        signs = tuple(int(s) for s in args.signs)
        w = horowitz_word(HorowitzParams(args.m, signs))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, str(w), {"m": args.m, "signs": list(signs), "word": str(w), "length": len(w)})
    return 0


def cmd_wehrfritz(args):
    from .wehrfritz import build_representation, classify, trace_of
    g = _word(args, args.gamma)
    rep = build_representation(g)
    tg = trace_of(rep, g)
    lines = [f"gamma: {g}  core: {rep.delta}  index m = {rep.m}  dimension {rep.dim}",
             f"basis: {', '.join(str(b) for b in rep.cosets.basis)}",
             f"trace(gamma) = {tg}"]
    rec = {"gamma": str(g), "m": rep.m, "dimension": rep.dim,
           "basis": [str(b) for b in rep.cosets.basis], "trace_gamma": tg.to_data(),
           "variables": list(rep.registry.names)}
    status = 0
    if args.eta is not None:
        h = _word(args, args.eta)
        b = classify(rep, h)
        sep = b.total != tg
        lines += [f"trace(eta) = {b.total}", f"case: {b.case}",
                  f"fixed cosets: {list(b.fixed_cosets)}  T-counts: {dict(sorted(b.tau_counts.items()))}",
                  f"traces differ: {'yes' if sep else 'no'}"]
        rec.update({"eta": str(h), "trace_eta": b.total.to_data(), "case": str(b.case),
                    "fixed_cosets": list(b.fixed_cosets),
                    "tau_counts": {str(k): v for k, v in sorted(b.tau_counts.items())},
                    "traces_differ": sep})
    _emit(args, "\n".join(lines), rec)
    return status


def _parse_assign(items):
    out = {}
    for item in items or ():
        name, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"assignment {item!r} is not NAME=VALUE")
        try:
            out[name.strip()] = int(val)
        except ValueError:
            out[name.strip()] = Fraction(val)
    return out or None


def cmd_separate(args):
    from .separation import finite_quotient_certificate, witness_to_json
    g, h = _word(args, args.gamma), _word(args, args.eta)
    asg = _parse_assign(args.assign)
    if asg is not None:
        from .separation import default_assignment
        from .wehrfritz import build_representation
        full = default_assignment(build_representation(g))
        full.update(asg)
        asg = full
    try:
        w = finite_quotient_certificate(g, h, asg)
    except ConjugatePair as exc:
        _emit(args, f"conjugate pair: {exc}", {"gamma": str(g), "eta": str(h), "conjugate": True})
        return 1
    human = "\n".join([
        f"witness for ({g}, {h}): dimension d = {w.dimension}, p = {w.p}",
        f"tr(gamma) = {w.trace_gamma}, tr(eta) = {w.trace_eta} (mod {w.p})",
        f"quotient order bound p^(d^2-1) = {w.p}^{w.dimension ** 2 - 1}",
        "certificate:", witness_to_json(w)])
    _emit(args, human, witness_to_json(w))
    return 0


def cmd_con_exact(args):
    from .separation import Unknown, con_exact_small
    u, v = _word(args, args.u), _word(args, args.v)
    try:
        val = con_exact_small(u, v, args.max)
    except ConjugatePair:
        _emit(args, "conjugate pair", {"u": args.u, "v": args.v, "conjugate": True})
        return 1
    known = not isinstance(val, Unknown)
    _emit(args, f"Con({args.u}, {args.v}) = {val}" + (f" (exact below K={args.max})" if known else ""),
          {"u": args.u, "v": args.v, "K": args.max, "value": val if known else None,
           "exact": known})
    return 0 if known else 1


def cmd_d_exact(args):
    from .separation import Unknown, d_exact_small
    w = _word(args, args.w)
    val = d_exact_small(w, args.max)
    known = not isinstance(val, Unknown)
    _emit(args, f"D({args.w}) = {val}", {"w": args.w, "K": args.max,
                                          "value": val if known else None, "exact": known})
    return 0 if known else 1


def cmd_conj_depth(args):
    from .separation import conj_depth_report
    rows = conj_depth_report(args.rank, args.norm, args.max)
    if args.format == "jsonl":
        for n, val, pair in rows:
            _emit(args, None, {"norm": n, "K": args.max,
                               "value": val if isinstance(val, int) else None,
                               "pair": [str(x) for x in pair] if pair else None})
    else:
        print(f"{'n':>3}  Conj(n)  witness pair (exact below K={args.max})")
        for n, val, pair in rows:
            ptxt = f"{pair[0]}, {pair[1]}" if pair else "-"
            print(f"{n:>3}  {str(val):>7}  {ptxt}")
    return 0


def cmd_search(args):
    from .traceid.search import report_to_jsonl, search_pairs
    lo = args.min_length if args.min_length is not None else args.length
    reports = [search_pairs(L, args.n, args.positive, args.no_reverse, args.no_inverse,
                            seed=args.seed, trials=args.trials, jobs=args.jobs)
               for L in range(lo, args.length + 1)]
    if args.format == "jsonl":
        for r in reports:
            sys.stdout.write(report_to_jsonl(r))
    else:
        for r in reports:
            print(f"length {r.length}: {r.classes} classes, {len(r.pairs)} pairs")
            for p in r.pairs:
                print("  " + p.line())
    return 0


def cmd_tradeup(args):
    from .traceid.tradeup import leading_atom, tradeup_rewrite
    w = _word(args, args.w)
    e = tradeup_rewrite(w, args.n)
    lead = leading_atom(e)
    lead_txt = "-"
    if lead is not None:
        lead_txt = f"{parse_word_from(lead[0])} (coefficient {lead[1]})"
    _emit(args, f"tr({args.w}) = {e}\nleading atom: {lead_txt}",
          {"w": args.w, "n": args.n, "expression": str(e),
           "leading_atom": str(parse_word_from(lead[0])) if lead else None,
           "leading_coefficient": str(lead[1]) if lead else None})
    return 0


def parse_word_from(letters):
    from .freegroup import Word
    return Word(letters, max(2, max(map(abs, letters))))


def _load_quotient(spec):
    from .repcover import cyclic_quotient, parse_quotient, symmetric3_quotient
    if spec.startswith("cyclic:"):
        try:
            _, n, imgs = spec.split(":")
            return cyclic_quotient(int(n), tuple(int(x) for x in imgs.split(",")))
        except ValueError as exc:
            raise UsageError(f"bad cyclic quotient spec {spec!r}") from exc
    if spec == "s3":
        return symmetric3_quotient()
    try:
        with open(spec) as fh:
            return parse_quotient(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read quotient file: {exc}") from exc


def cmd_lift(args):
    from .repcover import build_certificate, certificate_to_json, verify_diagram
    Q = _load_quotient(args.quotient)
    cert = build_certificate(Q, args.p, m=args.m, depth=args.depth)
    checks = verify_diagram(Q, cert)
    ok = all(v is not False for v in checks.values())
    human = [f"quotient of order {Q.order}, p = {cert.p}, dimension n = {cert.dim}",
             f"|SL(n, F_p)| = {cert.group_order}, exponent e = {cert.exponent}",
             f"lift kinds: {', '.join(cert.lift_kinds)}"]
    human += [f"  {k}: {v}" for k, v in checks.items()]
    human.append("freeness is checked only up to the relation depth; "
                 "the triangularizability test is a heuristic")
    human += ["certificate:", certificate_to_json(cert)]
    _emit(args, "\n".join(human), certificate_to_json(cert))
    return 0 if ok else 1


def cmd_verify(args):
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc
    lines = [s for s in text.splitlines() if s.strip()]
    try:
        head = json.loads(lines[0])
    except (IndexError, json.JSONDecodeError) as exc:
        raise ParseError(f"not a certificate: {exc}") from exc
    kind = head.get("format")
    if kind == "conjtrace-witness":
        from .separation import verify_witness, witness_from_json
        checks = verify_witness(witness_from_json(lines[0]))
    elif kind == "conjtrace-lift":
        from .repcover import certificate_from_json, verify_diagram
        cert = certificate_from_json(lines[0])
        checks = verify_diagram(cert.quotient, cert)
    elif kind == "conjtrace-search":
        checks = _verify_search(text)
    else:
        raise ParseError(f"unknown certificate format {kind!r}")
    ok = all(v is not False for v in checks.values())
    human = "\n".join([f"{kind}: {'valid' if ok else 'INVALID'}"] +
                      [f"  {k}: {v}" for k, v in checks.items()])
    _emit(args, human, {"certificate": kind, "valid": ok, "checks": checks})
    return 0 if ok else 1


def _verify_search(text):
    """Re-check every report in a (possibly multi-length) search output."""
    from .traceid.common import evaluate_word, letter_mats
    from .traceid.fricke import fricke
    from .traceid.search import report_from_jsonl, witness_pairs
    chunks = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if json.loads(line).get("format") is not None:
            chunks.append([])
        chunks[-1].append(line)
    reports = [report_from_jsonl("\n".join(c)) for c in chunks]
    pairs = [p for r in reports for p in r.pairs]
    checks = {"reports": len(reports),
              "non_conjugate": all(not are_conjugate(p.u, p.v) for p in pairs),
              "sl2_equivalent": all(fricke(p.u) == fricke(p.v) for p in pairs)}
    ok = True
    for r in reports:
        hits = [(p, int(p.refutation.split(":")[1])) for p in r.pairs
                if p.refutation.startswith("witness:")]
        if not hits:
            continue
        mats = witness_pairs(r.seed, 1 + max(t for _, t in hits))
        for p, t in hits:
            lm = letter_mats(mats[t])
            ok &= evaluate_word(p.u, lm).trace() != evaluate_word(p.v, lm).trace()
    checks["sl3_witnesses"] = ok
    return checks


# -- parser -------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "jsonl"), default="human",
                        help="output mode (default: human)")
    common.add_argument("--rank", type=int, default=2, help="free group rank (default: 2)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for randomized steps (default: {DEFAULT_SEED})")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel worker processes (default: available cores)")

    p = argparse.ArgumentParser(prog="conjtrace", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"conjtrace {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("conj", cmd_conj, "decide conjugacy and print canonical classes (status 1 if not conjugate)")
    sp.add_argument("u")
    sp.add_argument("v")

    sp = add("fricke", cmd_fricke, "SL2 trace polynomial; with two words, decide SL2-trace equivalence")
    sp.add_argument("u")
    sp.add_argument("v", nargs="?")
    sp.add_argument("-v", "--verbose", action="store_true", help="also print both polynomials")

    sp = add("horowitz", cmd_horowitz, "print the Horowitz word for depth m and signs")
    sp.add_argument("m", type=int)
    sp.add_argument("signs", nargs="*", help="one of 1 or -1 per level")

    sp = add("wehrfritz", cmd_wehrfritz, "traces of the induced representation and case classification")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--eta")

    sp = add("separate", cmd_separate, "finite-quotient witness separating gamma from eta")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--eta", required=True)
    sp.add_argument("--assign", nargs="*", metavar="NAME=VALUE",
                    help="override specialization values (others keep their defaults)")

    sp = add("con-exact", cmd_con_exact, "minimal separating quotient order by brute force (status 1 if unknown)")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("--max", type=int, default=6, help="largest quotient order K (default: 6)")

    sp = add("d-exact", cmd_d_exact, "minimal quotient order detecting w by brute force (status 1 if unknown)")
    sp.add_argument("w")
    sp.add_argument("--max", type=int, default=6, help="largest quotient order K (default: 6)")

    sp = add("conj-depth", cmd_conj_depth, "table of max Con over class pairs of norm <= n")
    sp.add_argument("--norm", type=int, required=True)
    sp.add_argument("--max", type=int, default=6, help="largest quotient order K (default: 6)")

    sp = add("search", cmd_search, "search for non-conjugate SL2-trace equivalent pairs")
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--min-length", type=int, help="search every length from this one up")
    sp.add_argument("--n", type=int, choices=(2, 3), default=2, help="test dimension (default: 2)")
    sp.add_argument("--positive", action="store_true", help="positive words only")
    sp.add_argument("--no-reverse", action="store_true", help="drop reverse pairs")
    sp.add_argument("--no-inverse", action="store_true", help="drop inverse pairs")
    sp.add_argument("--trials", type=int, default=25, help="SL3 witness budget (default: 25)")

    sp = add("tradeup", cmd_tradeup, "rewrite a trace in terms of positive-word traces")
    sp.add_argument("w")
    sp.add_argument("--n", type=int, required=True)

    sp = add("lift", cmd_lift, "lift a finite quotient through SL(n, Z) and check the diagram")
    sp.add_argument("--quotient", required=True,
                    help="quotient file, 'cyclic:N:i,j,...' or 's3'")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, default=1, help="exponent multiplier (default: 1)")
    sp.add_argument("--depth", type=int, default=6, help="relation check depth L (default: 6)")

    sp = add("verify", cmd_verify, "re-check a serialized certificate or search report")
    sp.add_argument("file")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.rank < 1 or args.jobs < 1:
        parser.error("--rank and --jobs must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ParseError, ConjTraceError) as exc:
        print(f"conjtrace: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, (ParseError, ValueError)) else 1


if __name__ == "__main__":
    sys.exit(main())
