"""Command-line front end: one subcommand per construction or check.

Exit status is 0 on success, 1 when a checked property fails, and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import forest as fo
from . import graphs as gr
from . import omega as om
from . import semigroup as sg
from . import sk
from . import synthesis as sy
from .green import d_equals_j, green
from .words import SQUARE_FREE, THUE_MORSE, is_overlap_free, is_square_free, missing_factors


class CheckFailed(Exception):
    """Carries a result whose verdict is negative."""

    def __init__(self, result):
        super().__init__("check failed")
        self.result = result


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def _ints(text: str) -> list:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def resolve_semigroup(spec: str, budget: int = sg.DEFAULT_BUDGET) -> sg.FiniteSemigroup:
    """A JSON file, or a built-in: ``sk:K``, ``skp:K:P``, ``tk:K``, ``gamma:N``, ``mn:N``,
    ``cyclic:N``, ``leftzero:N``, ``nilpotent:N``, ``trivial``."""
    if os.path.exists(spec):
        return sg.load(spec)
    name, *args = spec.split(":")
    args = [int(a) for a in args]
    try:
        if name == "sk":
            return sk.build(args[0], sk.SK)
        if name == "skp":
            return sk.build(args[0], sk.SKP, p=args[1])
        if name == "tk":
            return sk.build(args[0], sk.SK, "T")
        if name == "tkp":
            return sk.build(args[0], sk.SKP, "T", p=args[1])
        if name == "gamma":
            return gr.transition_monoid(gr.gamma(args[0]), budget=budget)[0]
        if name == "mn":
            return gr.build_Mn(args[0], budget=budget).top
        if name == "cyclic":
            return sg.cyclic_group(args[0])
        if name == "leftzero":
            return sg.left_zero([chr(ord("a") + i) for i in range(args[0])])
        if name == "nilpotent":
            return sg.monogenic(args[0])
        if name == "trivial":
            return sg.trivial()
    except IndexError:
        raise UsageError(f"missing parameter in semigroup spec {spec!r}") from None
    raise UsageError(f"no such file or built-in semigroup: {spec!r}")


def _images(S, text: str) -> dict:
    out = {}
    for part in text.split(","):
        letter, _, val = part.partition("=")
        if not letter or not val:
            raise UsageError(f"bad image {part!r}; expected letter=element")
        out[letter.strip()] = int(val) if val.strip().isdigit() else S.index(val.strip())
    return out


def _graph(args) -> gr.LabeledDigraph:
    if getattr(args, "graph", None):
        return gr.load_graph(args.graph)
    if getattr(args, "words", None):
        return gr.flower(args.words)
    raise UsageError("give words or --graph FILE")


# ---------------------------------------------------------------------------
# commands; each returns a result dict (or a graph for --format dot)


def cmd_ptm(args):
    w = THUE_MORSE.iterate(args.letter, args.n)
    if not args.check:
        return {"word": w}
    return {"word": w, "length": len(w), "overlap_free": is_overlap_free(w),
            "missing_factors_le3": sorted(missing_factors(w, "ab", 3))}


def cmd_subst(args):
    w = SQUARE_FREE.iterate(args.letter, args.n)
    if not args.check:
        return {"word": w}
    return {"word": w, "length": len(w), "square_free": is_square_free(w)}


def cmd_flower(args):
    return gr.gamma(args.gamma) if args.gamma is not None else _graph(args)


def cmd_fold(args):
    if args.lam is not None:
        return gr.lambda_graph(args.lam)
    return gr.stallings_fold(_graph(args))


def cmd_transition_monoid(args):
    if args.mn is not None:
        tower = gr.build_Mn(args.mn, budget=args.budget)
        M = tower.top
        extra = {"levels": [len(x) for x in tower.monoids], "restrictions": gr.check_tower(tower)}
    else:
        g = gr.gamma(args.gamma) if args.gamma is not None else _graph(args)
        M, _ = gr.transition_monoid(g, budget=args.budget)
        extra = {}
    if not args.stats:
        return sg.to_dict(M)
    out = {"size": len(M), "aperiodic": sg.is_aperiodic(M), "inverse": sg.is_inverse(M),
           "idempotents": len(M.idempotents)}
    out.update({f"breakdown_{k}": v for k, v in M.meta["breakdown"].items()})
    out.update(extra)
    return out


def cmd_green(args):
    S = resolve_semigroup(args.semigroup, args.budget)
    G = green(S)
    out = {f"{k}_classes": v for k, v in G.class_counts().items()}
    out["D_equals_J"] = d_equals_j(G)
    out["regular_D_classes"] = sum(G.regular.values())
    if args.classes:
        for k in "RLJHD":
            out[k] = [[S.names[x] for x in c] for c in getattr(G, k).classes]
    return out


def cmd_check(args):
    S = resolve_semigroup(args.semigroup, args.budget)
    laws = []
    if args.laws_file:
        with open(args.laws_file) as fh:
            laws += om.read_laws(fh.read())
    for spec in args.law or []:
        laws.append(om.resolve_law(spec, k=args.k, p=args.p, n=args.n))
    if not laws:
        raise UsageError("give --law or --laws-file")
    results = []
    ok = True
    for law in laws:
        if law.name == "knast" and args.strategy == "restricted":
            r = om.knast_check(S)
        else:
            r = om.check_law(S, law, args.strategy, budget=args.budget)
        ok &= r.holds
        results.append({"law": str(law), "holds": r.holds, "witness": om.witness_names(S, r.witness)})
    out = results[0] if len(results) == 1 else {"laws": results, "holds": ok}
    if not ok:
        raise CheckFailed(out)
    return out


def cmd_sk(args):
    variant = sk.SKP if args.p else sk.SK
    if args.normalize is not None:
        return {"normal_form": str(sk.normalize(args.normalize, args.k, variant, args.p))}
    if args.witness:
        try:
            return sk.malcev_witness_check(args.k, variant, args.p)
        except sk.WitnessFailed as e:
            raise CheckFailed({"passed": False, "error": str(e)}) from None
    which = args.variant
    S = sk.build_R(args.k, variant, args.p) if which == "R" else sk.build(args.k, variant, which, args.p)
    if args.stats:
        return {"size": len(S), "idempotents": len(S.idempotents), "aperiodic": sg.is_aperiodic(S)}
    return sg.to_dict(S)


def cmd_separate(args):
    variant = sk.SKP if args.p else sk.SK
    r = sk.separation_check(_ints(args.seq1), _ints(args.seq2), variant, args.p)
    if not (r["separated"] and r["matches_closed_forms"]):
        raise CheckFailed(r)
    return r


def cmd_forest(args):
    S = resolve_semigroup(args.semigroup, args.budget)
    images = _images(S, args.images)
    f = fo.build_forest(images, S, args.word)
    d = json.loads(fo.forest_json(f, S))
    if not d["verified"]:
        raise CheckFailed(d)
    return d


def cmd_lift(args):
    L = gr.lifting_words(args.n, args.w)
    return {"n": L.n, "w": L.w, "u": L.u, "v": L.v, "target": gr.gamma(args.n).names[L.target]}


def cmd_tree_witness(args):
    r = gr.tree_witness(args.base, args.depth)
    if not r["ok"]:
        raise CheckFailed(r)
    return r


def cmd_synthesis(args):
    G = sg.cyclic_group(args.group)
    f = _ints(args.f) if args.f else [i % args.group for i in range(args.m + 1)]
    if args.witness:
        try:
            return sy.sl_witness(args.m, G, f)
        except sy.WitnessFailed as e:
            raise CheckFailed({"passed": False, "error": str(e)}) from None
    U = sy.synthesis_U(sy.capped_addition(args.m), G, f)
    return sg.to_dict(U)


def cmd_kernel_gens(args):
    S = resolve_semigroup(args.semigroup, args.budget)
    N = resolve_semigroup(args.target, args.budget) if args.target else S
    phi = _ints(args.phi) if args.phi else list(range(len(S)))
    A = _ints(args.A) if args.A else list(S.generating_set())
    return fo.nilpotent_kernel_generators(S, N, phi, A, args.n)


# ---------------------------------------------------------------------------
# output


def _tsv(result) -> str:
    if isinstance(result, dict) and len(result) == 1:
        (v,) = result.values()
        if not isinstance(v, (dict, list)):
            return str(v)
    lines = []
    for k, v in result.items():
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, (dict, list, tuple)):
            v = json.dumps(v)
        lines.append(f"{k}\t{v}")
    return "\n".join(lines)


def render(result, fmt: str) -> str:
    if isinstance(result, gr.LabeledDigraph):
        if fmt == "dot":
            return result.to_dot()
        result = result.to_dict()
    elif fmt == "dot":
        raise UsageError("--format dot applies to graph outputs only")
    if fmt == "json":
        return json.dumps(result, default=str)
    return _tsv(result)


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text + "\n")
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".finsemi-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text + "\n")
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv", "dot"], default="tsv")
    common.add_argument("--budget", type=int, default=sg.DEFAULT_BUDGET)
    common.add_argument("--out", default=None, metavar="PATH")

    p = argparse.ArgumentParser(prog="finsemi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(func=func)
        return q

    q = add("ptm", cmd_ptm, "iterate the Thue-Morse substitution")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--letter", default="a", choices=["a", "b"])
    q.add_argument("--check", action="store_true")

    q = add("subst", cmd_subst, "iterate the square-free substitution")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--letter", default="a", choices=["a", "b", "c"])
    q.add_argument("--check", action="store_true")

    q = add("flower", cmd_flower, "flower digraph of words")
    q.add_argument("words", nargs="*")
    q.add_argument("--gamma", type=int, default=None)
    q.add_argument("--graph", default=None)

    q = add("fold", cmd_fold, "Stallings folding")
    q.add_argument("words", nargs="*")
    q.add_argument("--graph", default=None)
    q.add_argument("--lambda", dest="lam", type=int, default=None,
                   help="fold the flower of the n-th square-free iterates of a, b, c")

    q = add("transition-monoid", cmd_transition_monoid, "transition monoid of a digraph")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--gamma", type=int)
    g.add_argument("--mn", type=int)
    g.add_argument("--graph")
    q.add_argument("--stats", action="store_true")

    q = add("green", cmd_green, "Green's relations")
    q.add_argument("--semigroup", required=True)
    q.add_argument("--classes", action="store_true")

    q = add("check", cmd_check, "check laws on a semigroup")
    q.add_argument("--semigroup", required=True)
    q.add_argument("--law", action="append")
    q.add_argument("--laws-file")
    q.add_argument("--strategy", choices=["exhaustive", "restricted"], default="restricted")
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--p", type=int, default=2)
    q.add_argument("--n", type=int, default=3)

    q = add("sk", cmd_sk, "presented semigroups S_k, S_k(p)")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--p", type=int, default=None)
    q.add_argument("--variant", choices=["S", "T", "R"], default="S")
    q.add_argument("--witness", action="store_true")
    q.add_argument("--stats", action="store_true")
    q.add_argument("--normalize", metavar="WORD")

    q = add("separate", cmd_separate, "separate two increasing sequences")
    q.add_argument("--seq1", required=True)
    q.add_argument("--seq2", required=True)
    q.add_argument("--p", type=int, default=None)

    q = add("forest", cmd_forest, "Ramseyan factorization forest")
    q.add_argument("--semigroup", required=True)
    q.add_argument("--images", required=True, help="e.g. a=0,b=1")
    q.add_argument("--word", required=True)

    q = add("lift", cmd_lift, "lifting words")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--w", default="")

    q = add("tree-witness", cmd_tree_witness, "binary-tree witness")
    q.add_argument("--base", type=int, default=0)
    q.add_argument("--depth", type=int, required=True)

    q = add("synthesis", cmd_synthesis, "synthesis semigroup over capped addition")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--group", type=int, default=2, help="order of the cyclic group")
    q.add_argument("--f", default=None, help="images of 0..m as group exponents")
    q.add_argument("--witness", action="store_true")

    q = add("kernel-gens", cmd_kernel_gens, "generators of the preimage of zero")
    q.add_argument("--semigroup", required=True)
    q.add_argument("--target", default=None)
    q.add_argument("--phi", default=None)
    q.add_argument("--A", default=None)
    q.add_argument("--n", type=int, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        code = 0
    except CheckFailed as e:
        result, code = e.result, 1
    except (UsageError, ValueError, KeyError, OSError, om.TermError) as e:
        print(f"finsemi {args.command}: {e}", file=sys.stderr)
        return 2
    try:
        _write(render(result, args.format), args.out)
    except UsageError as e:
        print(f"finsemi {args.command}: {e}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
