"""Command line driver: one subcommand per verification.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 a
resource bound was hit.  ``FRSTAB_MAX_MEMORY_MB`` caps the address space.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import fr
from .freeprod import GroupFamily
from .functors import TabulatedFunctor, dg_h1_functor
from .groups import GroupError, resolve_group
from .homology.bar import BoundExceeded
from .homology.chain import order_complex
from .homology.snf import BACKEND
from .report import ReportSink, make_report
from .trees import ENUM_BOUND, check_poset_axioms, enumerate_trees, fancy_trees, tree_poset

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
MEMORY_ENV = "FRSTAB_MAX_MEMORY_MB"


class UsageError(Exception):
    pass


class ResourceBound(Exception):
    pass


def _apply_memory_limit():
    mb = os.environ.get(MEMORY_ENV)
    if not mb:
        return
    import resource

    try:
        limit = int(mb) * 1024 * 1024
    except ValueError:
        raise UsageError(f"{MEMORY_ENV} must be an integer number of megabytes") from None
    _, hard = resource.getrlimit(resource.RLIMIT_AS)
    if hard != resource.RLIM_INFINITY:
        limit = min(limit, hard)
    resource.setrlimit(resource.RLIMIT_AS, (limit, hard))


def _groups(args, default: str | None = None) -> list:
    text = args.groups or default
    if not text:
        raise UsageError("--groups is required")
    try:
        return [resolve_group(s) for s in text.split(",") if s.strip()]
    except GroupError as exc:
        raise UsageError(str(exc)) from None


def _family(args, default=None) -> GroupFamily:
    return GroupFamily.of(_groups(args, default))


def _n(args, lo: int = 1, hi: int = ENUM_BOUND) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < lo:
        raise UsageError(f"--n must be at least {lo}")
    if args.n > hi:
        raise ResourceBound(f"--n {args.n} exceeds the bound {hi}")
    return args.n


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# --- subcommands ---------------------------------------------------------------


def cmd_trees(args, sink: ReportSink):
    n = _n(args)
    E = list(range(1, n + 1))
    trees = enumerate_trees(E)
    axioms = check_poset_axioms(E)
    H = order_complex(tree_poset(E)).homologies()
    point = str(H[0]) == "Z" and all(h.is_trivial for h in H[1:])
    sink.add(make_report("poset axioms of the folding order", {"n": n}, {"trees": len(trees)}, "partial order, graded by mute count",
                         axioms["ok"], {k: v[:3] for k, v in axioms.items() if isinstance(v, list) and v}))
    sink.add(make_report("order complex of J_E is acyclic", {"n": n}, [str(h) for h in H], "Z, 0, ...", point))
    nf = len(fancy_trees(E))
    # fancy trees are rooted forests on E, counted by Cayley's (n+1)^(n-1)
    sink.add(make_report("fancy trees counted by (n+1)^(n-1)", {"n": n}, nf, (n + 1) ** (n - 1), nf == (n + 1) ** (n - 1)))
    if args.verbose:
        for A in trees:
            sink.add_row({"tree": str(A), "mutes": A.mute_count()})


def _trial(item):
    n, seed = item
    return fr.dec_pira_random_trial(n, seed)


def cmd_dec_pira(args, sink: ReportSink):
    n = _n(args, 1, 4)
    labels = list(range(1, n + 1))
    if args.functor:
        try:
            T = TabulatedFunctor.from_json(Path(args.functor).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read functor file: {exc}") from None
        problems = T.validate()
        sink.add(make_report("replayed table is a functor", {"n": n, "functor": args.functor},
                             f"{len(problems)} problems", "0 problems", not problems, problems[:5]))
        if problems:
            return
        r = fr.dec_pira_check(labels, T)
        sink.add(make_report("homology of T o F_E is the fancy cross-effect sum", {"n": n, "functor": args.functor},
                             r["H"], r["rhs"], r["pass"], r["contributions"]))
        return
    results = _map(_trial, [(n, args.seed + k) for k in range(args.trials)], args.jobs)
    for r in results:
        sink.add(make_report("homology of T o F_E is the fancy cross-effect sum", {"n": n, "seed": r["seed"], "functor": r["functor"]},
                             r["H"], r["rhs"], r["pass"], r["contributions"]))
    fam = _family(args, ",".join(["Z2"] * n))
    if len(fam) != n:
        raise UsageError("--groups must list exactly n groups")
    r = fr.dec_pira_check(fam.labels, dg_h1_functor(fam))
    sink.add(make_report("homology of H_1 o D_G o F_E is the fancy cross-effect sum", {"family": repr(fam)},
                         r["H"], r["rhs"], r["pass"], r["contributions"]))


def cmd_fr_h1(args, sink: ReportSink):
    fam = _family(args)
    if len(fam) > 4:
        raise ResourceBound("fr-h1 is limited to at most 4 factors")
    a = fr.h1_fr_presentation(fam)
    b, contrib = fr.h1_fr_formula(fam, detail=True)
    c = fr.h1_direct_formula(fam)
    sink.add(make_report("abelianized presentation equals the fancy-tree cross-effect sum", {"family": repr(fam)},
                         a, b, a == b, [[str(A), str(g)] for A, g in contrib]))
    sink.add(make_report("abelianized presentation equals sum over i != j of G_i^ab", {"family": repr(fam)}, a, c, a == c))
    if len(fam) >= 2:
        keep = list(fam.labels[:-1])
        r = fr.h1_naturality_check(fam.restrict(keep), fam, {e: e for e in keep})
        sink.add(make_report("decomposition is natural along the subfamily inclusion", {"family": repr(fam), "map": r["map"]},
                             {"injective": r["injective"], "cokernel": r["cokernel"]}, r["complement_sum"], r["pass"], r["witnesses"]))


def cmd_degree(args, sink: ReportSink):
    groups = _groups(args)
    if len(groups) != 1:
        raise UsageError("degree takes a single group")
    G = groups[0]
    n = args.n or 3
    if n > 4:
        raise ResourceBound("degree is limited to n <= 4")
    r = fr.degree_check(G, n, 2)
    sink.add(make_report("full cross effect of E -> H_1(FR) vanishes past degree 2", {"group": G.name, "n": n},
                         r["full_cross_effect"], "0", r["full_cross_effect"] == "0" and r["status"] == "holds",
                         {"values": r["values"], "witnesses": r["witnesses"]}))


def cmd_stability(args, sink: ReportSink):
    groups = _groups(args)
    if args.subfamily:
        fam = GroupFamily.of(groups)
        try:
            M = [int(x) for x in args.subfamily.split(",")]
        except ValueError:
            raise UsageError("--subfamily takes a comma list of labels") from None
        if not set(M) <= set(fam.labels):
            raise UsageError("--subfamily must list labels of the family")
        r = fr.subfamily_instance(fam, M)
        hyp = all(r["hypotheses"].values())
        sink.add(make_report("subfamily inclusion is an H_1 isomorphism", {"family": r["family"], "M": M, "hypotheses": r["hypotheses"]},
                             r["H1_small"], r["H1_big"], r["iso"] or not hyp, {"flag": r["flag"]}))
        return
    max_n = args.max_n or 6
    if max_n < 1:
        raise UsageError("--max-n must be at least 1")
    for G in groups:
        rows = fr.stability_h1_table(G, range(1, max_n + 1))
        if any(r.get("truncated") for r in rows):
            sink.truncated = True
        for row in rows:
            sink.add_row({k: row.get(k, "") for k in ("group", "n", "H1", "map_to", "flag", "iso", "generators", "relators", "truncated")})
        stable = [r for r in rows if "map_to" in r and r["n"] >= 4]
        sink.add(make_report("n -> n+1 induces an H_1 isomorphism for n >= 4", {"group": G.name, "max_n": max_n},
                             {r["n"]: r["flag"] for r in stable}, "iso", all(r["iso"] for r in stable)))


def cmd_relations(args, sink: ReportSink):
    fam = _family(args)
    if len(fam) > 4:
        raise ResourceBound("relations is limited to at most 4 factors")
    rep = fr.relation_report(fam)
    for variant, r in rep.items():
        lhs = f"{r['instances'] - r['failures']}/{r['instances']} hold"
        # only emitted relators are a verification; the others are reported
        verdict = r["holds"] or not r["emitted"]
        sink.add(make_report(f"relation family {variant}", {"family": repr(fam), "emitted": r["emitted"]}, lhs,
                             "all hold" if r["emitted"] else "reported", verdict, [r["first_failure"]] if r["first_failure"] else []))


def _stab(item):
    labels, tables, tree = item
    from .groups import FiniteGroup
    from .trees import parse_tree

    fam = GroupFamily(labels, [FiniteGroup(t, check=False) for t in tables])
    return fr.stabilizer_check(parse_tree(tree), fam)


def cmd_stabilizers(args, sink: ReportSink):
    fam = _family(args)
    if len(fam) > 4:
        raise ResourceBound("stabilizers is limited to at most 4 factors")
    abelian = all(fam[e].is_abelian for e in fam.labels)
    items = [(fam.labels, [fam[e].mult for e in fam.labels], str(A)) for A in enumerate_trees(fam.labels)]
    for r in _map(_stab, items, args.jobs):
        mult = r["homomorphism"] if abelian else r["opposite_homomorphism"]
        ok = mult and r["injective"] and r["image_is_supported"]
        lhs = {k: r[k] for k in ("homomorphism", "opposite_homomorphism", "injective", "image_is_supported", "sampled")}
        sink.add(make_report("stabilizer map is injective, multiplicative, onto the supported automorphisms",
                             {"family": repr(fam), "tree": r["tree"], "order": r["order"]}, lhs, "all true", ok, r["witnesses"]))


COMMANDS = {
    "trees": cmd_trees,
    "dec-pira": cmd_dec_pira,
    "fr-h1": cmd_fr_h1,
    "degree": cmd_degree,
    "stability": cmd_stability,
    "relations": cmd_relations,
    "stabilizers": cmd_stabilizers,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frstab", description="Verify tree, functor and automorphism constructions on small instances.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--n", type=int, help="number of labels")
        s.add_argument("--groups", "--group", dest="groups", help="comma list of built-in names or table files")
        s.add_argument("--max-n", type=int, help="largest n for stability")
        s.add_argument("--trials", type=int, default=20, help="random functors for dec-pira")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", help="report path")
        s.add_argument("--format", choices=["json", "csv", "text"], default="text")
        s.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "dec-pira":
            s.add_argument("--functor", help="tabulated functor JSON to replay")
        if name == "stability":
            s.add_argument("--subfamily", help="labels M for the subfamily criterion")
        if name == "trees":
            s.add_argument("--verbose", action="store_true", help="list the trees")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}
    config["backend"] = BACKEND
    sink = ReportSink(args.command, config)
    try:
        _apply_memory_limit()
        COMMANDS[args.command](args, sink)
    except UsageError as exc:
        print(f"frstab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceBound, BoundExceeded, MemoryError) as exc:
        print(f"frstab: resource bound: {exc}", file=sys.stderr)
        return EXIT_BOUND
    text = sink.write(args.out, args.format)
    sys.stdout.write(text)
    if not sink.passed:
        return EXIT_FAIL
    if sink.truncated:
        print("frstab: resource bound: table truncated", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
