"""Command-line front end.

Exit status: 0 when every hard check passes, 1 on a hard failure, 2 on a
usage or configuration error, 3 when a solver fails to converge.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import verify as V
from .constructions import hadamard, scaled_hadamard, three_valued_system
from .errors import BanachLabError, NonConvergenceError
from .exponent import Exponent
from .opnorm import matrix_from_csv, op_norm_estimate
from .report import emit_plot_data, merge_reports
from .sequences import ChainSubset, WeightSeq, lambda_bruteforce, lower_fundamental_lambda_dp

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3

SUITES = ("hadamard", "prop52", "eq4", "lemma1iii", "lemma3", "lemma5", "complexify",
          "condition12", "weights", "chain", "domination", "all")

# flag name -> help text; every flag is also a valid config-file key
FLAGS = {
    "p": "exponent(s) p, comma separated",
    "q": "exponent(s) q, comma separated ('inf' allowed)",
    "r": "exponent(s) or chain parameter(s) r",
    "v": "weight value(s) v",
    "n": "dimension(s) or block count",
    "level": "Hadamard level",
    "max_level": "largest Hadamard level",
    "k": "cardinality or k-range bound",
    "sigma": "sup-norm bound(s) sigma",
    "c": "condition-12 constants c",
    "count": "number of random samples or factorizations",
    "matrices": "number of random matrices",
    "perturbations": "number of perturbed factorizations",
    "indices": "explicit index set m_1 < m_2 < ... for a weight sequence",
    "anchors": "number of chain anchors",
    "window": "membership window T",
    "log2n": "log2 indices at which to evaluate a weight sequence",
    "matrix": "matrix CSV path",
    "seed": "random seed",
    "restarts": "multistart restarts",
    "out": "output path",
    "format": "json or csv",
    "plot": "emit plot CSV with axes x,y[,group]",
    "threads": "thread budget (falls back to BANACHLAB_THREADS)",
    "bruteforce": "also run the exhaustive oracle (true/false)",
}


class UsageError(Exception):
    pass


def _floats(s):
    return [float(Fraction(t)) if "/" in t else float(t) for t in str(s).split(",") if t.strip()]


def _ints(s):
    out = []
    for t in str(s).split(","):
        t = t.strip()
        if ".." in t:
            a, b = t.split("..")
            out.extend(range(int(a), int(b) + 1))
        elif t:
            out.append(int(t))
    return out


def _exponents(s):
    return [Exponent.of(t.strip()) for t in str(s).split(",") if t.strip()]


def _bool(s):
    t = str(s).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {s}")


def read_config(path):
    """Flat ``key = value`` lines with '#' comments; dotted keys keep their last part."""
    out = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.rsplit(".", 1)[-1].replace("-", "_")
        if key not in FLAGS or key in ("config",):
            raise UsageError(f"config line {lineno}: unknown key '{key}'")
        out[key] = value
    return out


class Params:
    """Flag values layered over config values; missing keys fall back to defaults."""

    def __init__(self, flags, config):
        self._values = dict(config)
        self._values.update({k: v for k, v in flags.items() if v is not None})

    def get(self, key, default, conv=lambda x: x):
        if key not in self._values:
            return default
        try:
            return conv(self._values[key])
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad value for --{key.replace('_', '-')}: {self._values[key]}") from exc

    def one(self, key, default, conv):
        vals = self.get(key, None, conv)
        if vals is None:
            return default
        if len(vals) != 1:
            raise UsageError(f"--{key.replace('_', '-')} takes a single value here")
        return vals[0]


def _threads(params):
    env = os.environ.get("BANACHLAB_THREADS")
    default = int(env) if env and env.isdigit() else 1
    t = params.one("threads", default, _ints)
    if t < 1:
        raise UsageError("--threads must be positive")
    return t


def _grid_report(name, reports, params):
    merged = merge_reports(reports, name)
    merged.params = params
    return merged


def run_suite(suite, P: Params):
    seed = P.one("seed", 0, _ints)
    threads = _threads(P)
    restarts = P.one("restarts", 16, _ints)
    if suite == "hadamard":
        r_list = P.get("r", [1.25, 1.5, 1.8], _floats)
        return V.verify_hadamard_suite(P.one("max_level", 10, _ints), r_list, restarts=restarts, seed=seed,
                                       threads=threads)
    if suite == "prop52":
        return V.verify_prop52(P.one("level", 4, _ints), P.one("p", Exponent.of(1.5), _exponents),
                               P.one("r", Exponent.of(2), _exponents), P.one("q", Exponent.of("inf"), _exponents),
                               count=P.one("count", 50, _ints), perturbations=P.one("perturbations", 20, _ints),
                               seed=seed, restarts=restarts, threads=threads)
    if suite in ("eq4", "lemma1iii"):
        ps = P.get("p", [1.3, 1.5, 1.8], _floats)
        vs = P.get("v", [0.25, 0.5, 1.0], _floats)
        ns = P.get("n", list(range(1, 6 if suite == "eq4" else 8)), _ints)
        count = P.one("count", 500 if suite == "eq4" else 50, _ints)
        reps = []
        for p in ps:
            for v in vs:
                for n in ns:
                    if suite == "eq4":
                        reps.append(V.verify_eq4(n, p, v, samples=count, seed=seed, threads=threads))
                    else:
                        reps.append(V.verify_lemma_1iii(n, p, v, subsets=count, seed=seed))
        rep = _grid_report(suite, reps, {"p": ps, "v": vs, "n": ns, "count": count})
        if suite == "lemma1iii":
            rep.warnings.extend(V.subset_sum_spread_warnings(reps))
        return rep
    if suite == "lemma3":
        return V.verify_lemma3_truncation(P.get("indices", list(range(1, 8)), _ints), P.one("p", 1.5, _floats),
                                          P.one("n", 6, _ints), P.one("k", 40, _ints), seed=seed)
    if suite == "lemma5":
        ps = P.get("p", [1.3, 1.5], _floats)
        qs = P.get("q", [3.0, 4.0], _floats)
        sigmas = P.get("sigma", [0.25, 0.5, 1.0], _floats)
        ns = P.get("n", list(range(1, 7)), _ints)
        v = P.one("v", None, _floats)
        reps = [V.verify_lemma5(n, p, q, v, s, restarts=restarts, seed=seed)
                for p in ps for q in qs for s in sigmas for n in ns]
        return _grid_report(suite, reps, {"p": ps, "q": qs, "sigma": sigmas, "n": ns, "v": v})
    if suite == "complexify":
        return V.verify_complexification(tuple(P.get("p", [1.5, 2.0, 3.0], _floats)),
                                         samples=P.one("count", 1000, _ints),
                                         matrices=P.one("matrices", 50, _ints), seed=seed, threads=threads)
    if suite == "condition12":
        rs = P.get("r", [0.1, 0.9], _floats)
        if len(rs) != 2:
            raise UsageError("--r takes two chain parameters r_small,r_large")
        return V.verify_condition12(rs[0], rs[1], P.one("p", 1.5, _floats), tuple(P.get("c", [0.25, 0.5, 1.0], _floats)),
                                    P.one("anchors", 6, _ints), seed=seed)
    if suite == "weights":
        return V.verify_weights(_weight_seq(P), P.one("p", 1.5, _floats), P.one("count", 100, _ints), seed=seed)
    if suite == "chain":
        rs = P.get("r", None, _floats)
        pairs = ((0.1, 0.5), (0.25, 0.75), (0.5, 0.9)) if rs is None else tuple(zip(rs, rs[1:]))
        return V.verify_chain(pairs, tuple(P.get("window", [100, 1000, 10000], _ints)), seed=seed)
    if suite == "domination":
        return V.verify_domination(tuple(P.get("n", [1, 2, 3, 4, 5], _ints)), P.one("p", 1.5, _floats),
                                   P.one("v", 1.0, _floats), seed=seed)
    if suite == "all":
        base = Params({"seed": str(seed), "threads": str(threads)}, {})
        reps = [run_suite(s, base) for s in SUITES if s != "all"]
        return _grid_report("all", reps, {"suites": [r.suite for r in reps]})
    raise UsageError(f"unknown suite '{suite}'")


def _weight_seq(P):
    p = P.one("p", 1.5, _floats)
    if "r" in P._values:
        return WeightSeq.from_chain(ChainSubset(Fraction(str(P.one("r", None, _floats)))), p,
                                    P.one("anchors", 6, _ints))
    return WeightSeq.from_indices(P.get("indices", list(range(1, 8)), _ints), p)


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_verify(args, P):
    rep = run_suite(args.suite, P)
    fmt = P.get("format", "json")
    plot = P.get("plot", None)
    if plot:
        axes = [a.strip() for a in plot.split(",")]
        if len(axes) not in (2, 3):
            raise UsageError("--plot takes x,y or x,y,group")
        try:
            text = emit_plot_data(rep, *axes)
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
    elif fmt == "csv":
        text = rep.to_csv()
    elif fmt == "json":
        text = rep.dumps()
    else:
        raise UsageError("--format must be json or csv")
    out = P.get("out", None)
    _write(text, out)
    print(rep.summary(), file=sys.stdout if out else sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_opnorm(args, P):
    path = P.get("matrix", None)
    if not path:
        raise UsageError("--matrix is required")
    try:
        A = matrix_from_csv(open(path, encoding="utf-8").read())
    except OSError as exc:
        raise UsageError(f"cannot read matrix: {exc}") from exc
    p = P.one("p", Exponent.of(2), _exponents)
    q = P.one("q", Exponent.of(2), _exponents)
    est = op_norm_estimate(A, p, q, restarts=P.one("restarts", 16, _ints), seed=P.one("seed", 0, _ints))
    out = dict(est.to_json(), p=p.to_json(), q=q.to_json(), rows=A.shape[0], cols=A.shape[1])
    _write(_dump(out), P.get("out", None))
    return EXIT_OK


def cmd_lambda(args, P):
    seq = _weight_seq(P)
    p = seq.p
    blocks = P.one("n", 6, _ints)
    systems = [three_valued_system(n, p, seq.at(n)) for n in range(1, blocks + 1)]
    total = sum(s.n for s in systems)
    ks = P.get("k", list(range(0, total + 1)), _ints)
    brute = P.get("bruteforce", False, _bool)
    rows = []
    for k in ks:
        row = {"k": k, "lambda": lower_fundamental_lambda_dp(systems, p, k)}
        if brute:
            row["bruteforce"] = lambda_bruteforce(systems, p, k)
        rows.append(row)
    payload = {"p": p.to_json(), "blocks": blocks, "weights": [s.v for s in systems], "values": rows}
    if P.get("format", "json") == "csv":
        keys = list(rows[0]) if rows else ["k", "lambda"]
        text = ",".join(keys) + "\n" + "".join(",".join(repr(r[k]) for k in keys) + "\n" for r in rows)
    else:
        text = _dump(payload)
    _write(text, P.get("out", None))
    return EXIT_OK


def cmd_weights(args, P):
    seq = _weight_seq(P)
    payload = seq.to_json()
    pts = P.get("log2n", None, _floats)
    if pts is not None:
        payload["values"] = [{"log2n": L, "value": seq.at_log2(L)} for L in pts]
    _write(_dump(payload), P.get("out", None))
    return EXIT_OK


def cmd_chain(args, P):
    r = P.one("r", None, _floats)
    if r is None:
        raise UsageError("--r is required")
    chain = ChainSubset(Fraction(str(r)))
    T = P.one("window", 1000, _ints)
    elems = chain.window(T)
    if P.get("format", "json") == "csv":
        text = "element\n" + "".join(f"{m}\n" for m in elems)
    else:
        text = _dump({"r": str(chain.r), "window": T, "count": len(elems), "elements": elems})
    _write(text, P.get("out", None))
    return EXIT_OK


def cmd_export(args, P):
    if args.what != "hadamard":
        raise UsageError("only 'hadamard' can be exported")
    level = P.one("level", 3, _ints)
    r = P.one("r", None, _exponents)
    M = hadamard(level) if r is None else scaled_hadamard(level, r)
    if P.get("format", "csv") == "json":
        text = _dump({"level": level, "r": None if r is None else r.to_json(), "rows": M.tolist()})
    else:
        text = "".join(",".join(repr(x.item()) for x in row) + "\n" for row in M)
    _write(text, P.get("out", None))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    for key, help_text in FLAGS.items():
        common.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=help_text)
    common.add_argument("--config", default=None, help="key = value config file; flags override it")

    parser = argparse.ArgumentParser(prog="banachlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    pv = sub.add_parser("verify", parents=[common], help="run an inequality suite")
    pv.add_argument("suite", choices=SUITES)
    pv.set_defaults(func=cmd_verify)
    for name, func, help_text in (("opnorm", cmd_opnorm, "estimate ||A||_{p,q} with certified bounds"),
                                  ("lambda", cmd_lambda, "lower fundamental function of a block sum"),
                                  ("weights", cmd_weights, "weight sequence anchors and values"),
                                  ("chain", cmd_chain, "chain membership in a window")):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
    pe = sub.add_parser("export", parents=[common], help="export constructed objects")
    pe.add_argument("what", choices=("hadamard",))
    pe.set_defaults(func=cmd_export)
    return parser


def _error(kind, message, **details):
    print(json.dumps(dict({"error": kind, "message": message}, **details)), file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = read_config(args.config) if args.config else {}
        flags = {k: getattr(args, k) for k in FLAGS}
        return args.func(args, Params(flags, config))
    except UsageError as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    except NonConvergenceError as exc:
        _error(exc.kind, str(exc), **json.loads(json.dumps(exc.details, default=float)))
        return EXIT_SOLVER
    except BanachLabError as exc:
        _error(exc.kind, str(exc), **json.loads(json.dumps(exc.details, default=str)))
        return EXIT_USAGE
    except ValueError as exc:
        _error("value", str(exc))
        return EXIT_USAGE
