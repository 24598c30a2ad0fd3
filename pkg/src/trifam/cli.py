"""Command-line front end. Exit codes: 0 verified, 1 falsified, 2 usage or internal error."""

from __future__ import annotations

import argparse
import random
import sys

from . import antilinear as al
from . import cube_subspace as cs
from . import families as fam
from . import pipeline
from . import uniqueness as uq
from . import useful_sets as us
from .antilinear import parse_perm
from .certificate import Certificate, verdict, write_json

__all__ = ["main", "parse_perm"]


def _emit(cert: Certificate, args) -> int:
    print(f"{cert.status}: {cert.claim_id}")
    for key, value in cert.counters.items():
        if isinstance(value, (int, str, bool)) or value is None:
            print(f"  {key}: {value}")
    if args.json:
        write_json(args.json, cert)
    return pipeline.exit_code([cert])


def cmd_fano(args) -> int:
    cert = pipeline.run_claim(pipeline.REGISTRY["lemma-fano-count"], pipeline.Context())
    for text in cert.counters.get("permutations", []):
        print(text)
    return _emit(cert, args)


def cmd_antilinear(args) -> int:
    cert = pipeline.run_claim(pipeline.REGISTRY["antilinear-count"], pipeline.Context())
    return _emit(cert, args)


def cmd_subspace(args) -> int:
    p = parse_perm(args.perm)
    if not al.is_antilinear(p):
        cert = verdict("lemma-V", [{"not_antilinear": al.to_cycles(p)}], inputs={"perm": args.perm})
        return _emit(cert, args)
    s = cs.subspace_from_coloring(cs.coloring_from_perm(p))
    for k in range(8):
        print(f"v_{k} = {s.member(k).to_text()}")
    if not args.verify:
        if args.json:
            write_json(args.json, {"perm": args.perm,
                                   "members": [s.member(k).to_text() for k in range(8)]})
        return 0
    cert = cs.verify_cocube(s, oracle=True)
    cert.inputs["perm"] = args.perm
    return _emit(cert, args)


def cmd_bound(args) -> int:
    ctx = pipeline.Context(perm=args.perm, samples=args.samples, seed=args.seed)
    cap = pipeline.run_claim(pipeline.REGISTRY["coset-cap"], ctx)
    size = pipeline.run_claim(pipeline.REGISTRY["family-size"], ctx)
    code = max(_emit(cap, argparse.Namespace(json=None)), _emit(size, argparse.Namespace(json=None)))
    if args.json:
        write_json(args.json, {"certificates": [cap.to_dict(), size.to_dict()]})
    return code


def _var_order(text: str, nv: int):
    if text == "lex":
        return None
    if text == "reverse":
        return list(range(nv))[::-1]
    if text.startswith("random:"):
        order = list(range(nv))
        random.Random(int(text.split(":", 1)[1])).shuffle(order)
        return order
    raise ValueError(f"unknown variable order {text!r}")


def cmd_uniqueness(args) -> int:
    mode = {"nb": fam.NB_INTERSECTING, "tri": fam.TRI_INTERSECTING}[args.mode]
    p = parse_perm(args.perm)
    if not al.is_antilinear(p):
        raise ValueError(f"{args.perm} is not antilinear")
    s = cs.subspace_from_coloring(cs.coloring_from_perm(p))
    inst = uq.build_instance(s, mode, include_self=args.self == "on")
    out = uq.solve(inst, var_order=_var_order(args.var_order, inst.num_vars), workers=args.workers)
    cert = uq.emit_unsat_report(inst, out)
    cert.inputs["perm"] = args.perm
    print(f"search: {out.status}, {out.nodes} nodes, {out.elapsed:.2f} s")
    return _emit(cert, args)


def cmd_isets(args) -> int:
    return _emit(us.classify_isets(workers=args.workers), args)


def cmd_n9(args) -> int:
    if args.control:
        problem = us.n8_problem()
        out = us.coloring_search(problem, workers=args.workers, accept_cocube=True)
        cert = us.coloring_certificate(out, problem, "n8-control", expect=us.SAT)
    else:
        problem = us.n9_problem()
        out = us.coloring_search(problem, checkpoint=args.checkpoint, resume=args.resume,
                                 workers=args.workers, max_units=args.max_units)
        if out.status == us.INCOMPLETE:
            print(f"stopped after {out.units_done}/{out.units_total} units; resume with --resume")
        cert = us.coloring_certificate(out, problem, "n9-search", expect=us.UNSAT)
    print(f"search: {out.status}, {out.nodes} nodes, {out.units_done}/{out.units_total} units, "
          f"{out.elapsed:.2f} s")
    if out.status == us.INCOMPLETE:
        if args.json:
            write_json(args.json, cert)
        return pipeline.EXIT_ERROR
    return _emit(cert, args)


def cmd_verify_all(args) -> int:
    ctx = pipeline.Context(perm=args.perm, samples=args.samples, seed=args.seed, workers=args.workers)
    code, certs = pipeline.run_verify_all(fast=args.fast, ctx=ctx, out_dir=args.out, log=print)
    if args.json:
        write_json(args.json, pipeline.bundle_dict(certs, ctx, args.fast))
    print(f"{sum(c.ok for c in certs)}/{len(certs)} claims verified")
    return code


def cmd_mutations(args) -> int:
    results = pipeline.mutation_harness()
    missed = [name for name, failed in results.items() if not failed]
    for name, failed in results.items():
        print(f"{name:40s} caught by {', '.join(failed) or 'NOTHING'}")
    cert = verdict("mutation-sensitivity", [{"undetected": m} for m in missed],
                   counters={"mutations": len(results), "undetected": len(missed)})
    return _emit(cert, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trifam", description=__doc__)
    parser.add_argument("--workers", type=int, default=1, help="cap on worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", help="write the certificate here")
        p.add_argument("--workers", type=int, default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    add("fano", cmd_fano, "list the Fano permutations")
    add("antilinear", cmd_antilinear, "count antilinear permutations and check the factorization")
    p = add("subspace", cmd_subspace, "build the subspace from an antilinear permutation")
    p.add_argument("--perm", default="(1234)")
    p.add_argument("--verify", action="store_true", help="check the cube complements")
    p = add("bound", cmd_bound, "sampled coset-cap check and kernel-system sizes")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perm", default="(1234)")
    p = add("uniqueness", cmd_uniqueness, "the T ^ v_T constraint search")
    p.add_argument("--perm", default="(1234)")
    p.add_argument("--mode", choices=["nb", "tri"], default="nb")
    p.add_argument("--self", choices=["on", "off"], default="off")
    p.add_argument("--var-order", default="lex", help="lex, reverse or random:SEED (tie-breaking)")
    p = add("isets", cmd_isets, "I-set classification")
    p.add_argument("action", choices=["classify"])
    p = add("n9", cmd_n9, "K_9 coloring search (checkpointed)")
    p.add_argument("--checkpoint")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--max-units", type=int, help="stop after this many work units")
    p.add_argument("--control", action="store_true", help="run the K_8 analogue instead")
    p = add("verify-all", cmd_verify_all, "run every registered claim")
    p.add_argument("--fast", action="store_true", help="skip the long searches")
    p.add_argument("--out", help="directory for bundle.json and timings.json")
    p.add_argument("--perm", default="(1234)")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    add("mutations", cmd_mutations, "run the sabotage harness")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be positive")
    try:
        return args.func(args)
    except (ValueError, us.CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
