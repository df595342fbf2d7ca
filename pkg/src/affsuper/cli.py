"""Command-line front end.

Subcommands cover the full library surface: datum classification, the
reflection orbit, the classical and quantum relation catalogs, weight
multiplicities, the special weight list, the (delta, 2 rho) pairing, and
a bracket-expression evaluator.  Reports are deterministic; ``--json``
switches the format.  Exit codes: 0 all checks pass, 1 verification
failure, 2 usage error.
"""

import argparse
import json
import sys
from fractions import Fraction

from .datum import classify, datum_string, parse_datum, phi_sharp_g3
from .qshuffle import bracket_identities_check, verify_quantum
from .realization import LoopContext, weight_multiplicities
from .reflect import enumerate_orbit
from .relcheck import verify_catalog
from .words import E, F, abr, br, qbr

VERSION = "0.1.0"


# ---------------------------------------------------------------------------
# bracket-expression grammar:
#   expr  := leaf | '[[' expr ',' expr ']]' | '[' expr ',' expr ']' twist?
#   twist := '_{' ('q' ('^' rational)? | rational ) '}'
#   leaf  := ('E'|'F') integer
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ValueError("%s at position %d in %r" % (msg, self.pos, self.text))

    def peek(self, tok):
        return self.text.startswith(tok, self.pos)

    def eat(self, tok):
        if not self.peek(tok):
            self.error("expected %r" % tok)
        self.pos += len(tok)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def rational(self):
        start = self.pos
        if self.peek("-") or self.peek("+"):
            self.pos += 1
        while self.pos < len(self.text) and (
            self.text[self.pos].isdigit() or self.text[self.pos] == "/"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected a rational")
        return Fraction(self.text[start:self.pos])

    def twist(self):
        self.eat("_{")
        self.skip_ws()
        if self.peek("q"):
            self.eat("q")
            e = Fraction(1)
            if self.peek("^"):
                self.eat("^")
                e = self.rational()
        else:
            v = self.rational()
            if v != 1:
                self.error("only q-power twists are Laurent units; got %s" % v)
            e = Fraction(0)
        self.skip_ws()
        self.eat("}")
        return e

    def expr(self):
        self.skip_ws()
        if self.peek("[["):
            self.eat("[[")
            left = self.expr()
            self.skip_ws()
            self.eat(",")
            right = self.expr()
            self.skip_ws()
            self.eat("]]")
            return qbr(left, right)
        if self.peek("["):
            self.eat("[")
            left = self.expr()
            self.skip_ws()
            self.eat(",")
            right = self.expr()
            self.skip_ws()
            self.eat("]")
            if self.peek("_{"):
                return abr(left, right, self.twist())
            return br(left, right)
        if self.peek("E") or self.peek("F"):
            tag = self.text[self.pos]
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                self.error("expected a generator index")
            index = int(self.text[start:self.pos])
            return (E if tag == "E" else F)(index)
        self.error("expected an expression")


def parse_bracket_expr(text):
    p = _Parser(text)
    out = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _report(args, command, datum, body, ok=True):
    rep = {"command": command, "version": VERSION}
    if datum is not None:
        rep["datum"] = datum_string(datum)
    rep.update(body)
    rep["pass"] = bool(ok)
    if args.json:
        print(json.dumps(rep, sort_keys=True, default=str))
    else:
        for k in sorted(rep):
            print("%s: %s" % (k, rep[k]))
    return 0 if ok else 1


def _cmd_classify(args):
    d = parse_datum(args.datum)
    return _report(args, "classify", d, {"classification": classify(d)})


def _cmd_orbit(args):
    d = parse_datum(args.datum)
    orbit = enumerate_orbit(d)
    if args.dot:
        print(orbit.to_dot())
        return 0
    return _report(args, "orbit", d,
                   {"size": orbit.size, "graph": orbit.to_json()})


def _cmd_verify_classical(args):
    d = parse_datum(args.datum)
    ctx = LoopContext(d, window=args.window)
    rep = verify_catalog(d, ctx=ctx, mirror=True)
    ok = all(r["pass"] for r in rep["results"])
    return _report(args, "verify-classical", d,
                   {"engine": "loop", "results": rep["results"]}, ok)


def _cmd_verify_quantum(args):
    d = parse_datum(args.datum)
    rep = verify_quantum(d, expensive=args.expensive)
    idr = bracket_identities_check(d, trials=50, seed=args.seed)
    ok = all(r["pass"] for r in rep["results"]) and idr["pass"]
    return _report(
        args, "verify-quantum", d,
        {"engine": "radical", "results": rep["results"],
         "identities": {"pass": idr["pass"], "trials": idr["trials"]}},
        ok)


def _cmd_multiplicities(args):
    d = parse_datum(args.datum)
    ctx = LoopContext(d, window=args.window)
    mult = weight_multiplicities(ctx)
    dslot = len(d.labels) - 2
    rows, ok = [], True
    for w in sorted(mult, key=lambda t: tuple(map(str, t))):
        dim = mult[w]
        finite = w[:dslot] + w[dslot + 1:]
        real = any(finite)
        bound_ok = dim == 1 if real else dim <= d.n + 1
        ok = ok and bound_ok
        rows.append({
            "weight": [str(c) for c in w],
            "dim": dim,
            "kind": "real" if real else "imaginary",
            "pass": bound_ok,
        })
    return _report(args, "multiplicities", d, {"results": rows}, ok)


def _cmd_phi_sharp(args):
    d = parse_datum(args.datum)
    if d.family != "G3":
        print("phi-sharp is only defined for the G3 family", file=sys.stderr)
        return 2
    weights = phi_sharp_g3(d)
    return _report(args, "phi-sharp", d, {
        "count": len(weights),
        "weights": [[str(c) for c in w] for w in weights],
    })


def _cmd_delta_rho(args):
    d = parse_datum(args.datum)
    value = d.delta_two_rho()
    if args.json:
        return _report(args, "delta-rho", d, {"value": str(value)})
    print(value)
    return 0


def _cmd_eval(args):
    d = parse_datum(args.datum)
    from .words import eval_classical

    word = parse_bracket_expr(args.expr)
    ctx = LoopContext(d, window=args.window)
    value = eval_classical(word, ctx)
    zero = value.is_zero()
    return _report(args, "eval", d, {
        "expr": args.expr,
        "zero": zero,
        "weight": [str(c) for c in word.weight(d)],
    })


def _build_parser():
    top = argparse.ArgumentParser(
        prog="affsuper",
        description="exact affine Lie-superalgebra relation checks")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("datum", help="datum spec, e.g. CD@N=3;p=010 or G3")
        p.set_defaults(fn=fn)
        return p

    add("classify", _cmd_classify, help="diagram and datum summary")
    p = add("orbit", _cmd_orbit, help="reflection orbit of the datum")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p = add("verify-classical", _cmd_verify_classical,
            help="relation catalog in the loop realization")
    p.add_argument("--window", type=int, default=6)
    p = add("verify-quantum", _cmd_verify_quantum,
            help="relation catalog via the pairing radical")
    p.add_argument("--expensive", action="store_true",
                   help="include relations longer than 10 letters")
    p.add_argument("--seed", type=int, default=0)
    p = add("multiplicities", _cmd_multiplicities,
            help="weight-space dimensions in the loop realization")
    p.add_argument("--window", type=int, default=6)
    add("phi-sharp", _cmd_phi_sharp, help="special weight list (G3)")
    add("delta-rho", _cmd_delta_rho, help="(delta, 2 rho) of the datum")
    p = add("eval", _cmd_eval, help="evaluate a bracket expression")
    p.add_argument("expr", help="e.g. '[[E0,E1]]' or '[E1,E2]_{q^2}'")
    p.add_argument("--window", type=int, default=6)
    return top


def dispatch(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main():
    raise SystemExit(dispatch())


if __name__ == "__main__":
    main()
