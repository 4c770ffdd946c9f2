#!/usr/bin/env python3
"""
fundclass - explicit local fundamental classes, Artin maps and a brute-force
cohomology oracle from the command line
"""

import argparse
import logging
import math
import random
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from config import Config
from exceptions import (EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION, ConventionError, FundclassError, InputError,
                        LemmaViolationError, PropositionViolationError)
from fundclass import (FAMILIES, EncodingTuple, ExtensionSpec, Tower, artin_evaluate, artin_table,
                       fundamental_tuple, norm_group_membership, norm_quotient, reciprocity_normalization,
                       tame_tuple, verify_cocycle, verify_tuple)
from groups import AbelianPresentation, QuotientGroup, SubgroupSpec
from persistence import (PersistenceManager, cochain_to_dict, cocycle_from_dict, cocycle_to_dict, element_to_dict,
                         module_from_dict, module_to_dict, tuple_from_dict, tuple_to_dict, vector_to_list)
from report import FORMATS, build_document, emit, verification_summary
from zmod_cohomology import (FiniteGModule, coboundary, cup_h2_hminus2, cyclic_chi, dim_shift_backward,
                             dim_shift_forward, genchange_witness, h1_bruteforce, h2_bruteforce, inflate,
                             infres_b_via_dimshift, infres_invert, is_cocycle, random_cochain, random_cocycle,
                             solve_coboundary)

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], Dict[str, Any], int]


def _spec_from_args(args: argparse.Namespace) -> ExtensionSpec:
    if args.p is None or args.family is None:
        raise InputError("--p and --family are required")
    return ExtensionSpec(args.p, args.family, n=args.n, e=args.e, f=args.f, nu=args.nu,
                         precision=args.prec, unit=args.unit)


def _tuple_for(args: argparse.Namespace) -> Tuple[Tower, EncodingTuple, Dict[str, Any]]:
    """Run the requested route; returns the verification summary of the expanded cocycle"""
    spec = _spec_from_args(args)
    if args.route == "tame":
        tower, T = tame_tuple(spec)
        _, report = verify_tuple(tower, T, args.jobs)
        if not report.ok:
            raise ConventionError(f"tame tuple expands to a non-cocycle: witness {report.witness_text()}")
    else:
        tower, data, T = fundamental_tuple(spec, args.jobs)
        report = data.report
    return tower, T, verification_summary(report)


def _load_tuple(args: argparse.Namespace) -> Tuple[Tower, EncodingTuple, str]:
    return tuple_from_dict(PersistenceManager().load_payload(args.input))


def cmd_compute(args: argparse.Namespace) -> Outcome:
    tower, T, verification = _tuple_for(args)
    return tuple_to_dict(tower, T, args.route), verification, EXIT_OK


def cmd_verify(args: argparse.Namespace) -> Outcome:
    """Re-check a tuple or cocycle document and re-emit the decoded payload"""
    payload = PersistenceManager().load_payload(args.input)
    if "table" in payload:
        tower, c = cocycle_from_dict(payload)
        report = verify_cocycle(c, args.jobs)
        result = cocycle_to_dict(tower, c)
    elif "alpha" in payload:
        tower, T, route = tuple_from_dict(payload)
        _, report = verify_tuple(tower, T, args.jobs)
        result = tuple_to_dict(tower, T, route)
    else:
        raise InputError(f"{args.input} holds neither a tuple nor a cocycle")
    if not report.ok:
        logger.error(f"Verification failed at witness {report.witness_text()}")
        return result, verification_summary(report), EXIT_VERIFICATION
    logger.info(f"Verified {report.checked} cocycle triples from {args.input}")
    return result, verification_summary(report), EXIT_OK


def cmd_expand(args: argparse.Namespace) -> Outcome:
    tower, T, _ = _load_tuple(args)
    c, report = verify_tuple(tower, T, args.jobs)
    code = EXIT_OK if report.ok else EXIT_VERIFICATION
    return cocycle_to_dict(tower, c), verification_summary(report), code


def parse_base_element(text: str, tower: Tower):
    """A decimal integer, or "p^k*u" / "p^k" with p the residue characteristic"""
    text = text.replace(" ", "")
    if "^" not in text:
        try:
            return int(text)
        except ValueError:
            raise InputError(f"cannot parse element {text!r}")
    head, _, tail = text.partition("^")
    k_text, _, u_text = tail.partition("*")
    try:
        base, k, u = int(head), int(k_text), int(u_text or 1)
    except ValueError:
        raise InputError(f"cannot parse element {text!r}, expected p^k*u")
    if base != tower.spec.p:
        raise InputError(f"element base {base} differs from p={tower.spec.p}")
    if u == 0:
        raise InputError("the unit part must be nonzero")
    return tower.field.from_integer(u).shifted(k)


def cmd_artin(args: argparse.Namespace) -> Outcome:
    if args.input:
        tower, T, _ = _load_tuple(args)
    else:
        tower, T, _ = _tuple_for(args)
    table = artin_table(tower, T)
    Q = norm_quotient(tower)
    rows = []
    witness = None
    for j, row in enumerate(table):
        membership = norm_group_membership(tower, row.element)
        rows.append({"index": str(row.index), "element": element_to_dict(row.element),
                     "image": row.image.encode(), "class_order": str(membership.order)})
        consistent = (membership.order == tower.galois_L.orders[j]
                      and artin_evaluate(tower, T, row.element, table) == row.image)
        if not consistent and witness is None:
            witness = f"σ{row.index}"
    result = {"spec": tower.spec.to_dict(), "tower": tower.describe(), "artin": rows,
              "quotient": {"a": str(Q.a), "b": str(Q.b), "c": str(Q.c), "order": str(Q.order)}}
    if args.element:
        a = parse_base_element(args.element, tower)
        image = artin_evaluate(tower, T, a, table)
        result["evaluation"] = {"element": args.element, "image": image.encode(), "label": str(image)}
    if tower.spec.family == "cyclotomic":
        result["normalization"] = reciprocity_normalization(tower, T)
    verification = {"check": "N(α_i) has the order of σ_i and maps back to σ_i", "ok": witness is None,
                    "checked": str(len(table)), "witness": witness}
    if witness is not None:
        logger.error(f"Artin table is inconsistent at {witness}")
        return result, verification, EXIT_VERIFICATION
    return result, verification, EXIT_OK


def _cyclic_order(G: AbelianPresentation) -> int:
    if G.rank != 1:
        raise InputError(f"this operation needs a cyclic group, got {G.encode() or '1'}")
    return G.orders[0]


def _descriptor_dict(descriptor) -> Dict[str, Any]:
    return {"invariant_factors": vector_to_list(descriptor.invariant_factors),
            "elementary_divisors": vector_to_list(descriptor.elementary_divisors),
            "free_rank": str(descriptor.free_rank),
            "order": None if descriptor.order is None else str(descriptor.order)}


def _op_h(G: AbelianPresentation, A: FiniteGModule, args: argparse.Namespace) -> Outcome:
    descriptor = (h1_bruteforce if args.op == "h1" else h2_bruteforce)(G, A)
    result = _descriptor_dict(descriptor)
    result["representatives"] = [cochain_to_dict(c) for c in descriptor.representatives]
    checks = [is_cocycle(c) for c in descriptor.representatives]
    bad = next((c for c in checks if not c.ok), None)
    verification = {"check": "representatives are cocycles", "ok": bad is None,
                    "checked": str(len(checks)), "witness": None if bad is None else str(bad.witness)}
    return result, verification, EXIT_OK if bad is None else EXIT_VERIFICATION


def _op_genchange(G: AbelianPresentation, A: FiniteGModule, args: argparse.Namespace) -> Outcome:
    n = _cyclic_order(G)
    if args.k is None:
        raise InputError("--k is required for genchange")
    b = genchange_witness(n, args.k)
    chi = cyclic_chi(n)
    ok = coboundary(b) == chi - cyclic_chi(n, args.k).scale(args.k)
    cup = cup_h2_hminus2(chi, chi.group.generator(0) ** args.k)
    result = {"n": str(n), "k": str(args.k), "witness": cochain_to_dict(b), "cup": vector_to_list(cup)}
    verification = {"check": "χ - k·χ_k = db", "ok": ok, "checked": str(n * n), "witness": None}
    return result, verification, EXIT_OK if ok else EXIT_VERIFICATION


def _op_cup(G: AbelianPresentation, A: FiniteGModule, args: argparse.Namespace) -> Outcome:
    n = _cyclic_order(G)
    ks = [args.k] if args.k is not None else [k for k in range(1, n) if math.gcd(k, n) == 1]
    chi = cyclic_chi(n)
    values = {}
    failures = []
    for k in ks:
        value = cup_h2_hminus2(chi, chi.group.generator(0) ** k)
        values[str(k)] = vector_to_list(value)
        if value != (k % n,):
            failures.append(str(k))
    verification = {"check": "χ ∪ σ^k = k", "ok": not failures, "checked": str(len(ks)),
                    "witness": ",".join(failures) or None}
    return {"n": str(n), "cup": values}, verification, EXIT_OK if not failures else EXIT_VERIFICATION


def _op_dimshift(G: AbelianPresentation, A: FiniteGModule, args: argparse.Namespace) -> Outcome:
    rng = random.Random(args.seed)
    descriptor = h2_bruteforce(G, A)
    for sample in range(args.samples):
        c2 = random_cocycle(G, A, rng, descriptor=descriptor)
        c1 = dim_shift_backward(c2)
        if not is_cocycle(c1).ok or dim_shift_forward(c1) != c2:
            raise LemmaViolationError(f"dimension shift does not invert on sample {sample} (seed {args.seed})")
    result = {"samples": str(args.samples), "seed": str(args.seed), "h2": _descriptor_dict(descriptor)}
    verification = {"check": "forward ∘ backward = id", "ok": True, "checked": str(args.samples), "witness": None}
    return result, verification, EXIT_OK


def _parse_subgroup(G: AbelianPresentation, text: Optional[str]) -> SubgroupSpec:
    if not text:
        raise InputError("--subgroup is required for infres, e.g. '0,1' or '2,0;0,1'")
    return SubgroupSpec(G, tuple(G.parse_element(part) for part in text.split(";")))


def _op_infres(G: AbelianPresentation, A: FiniteGModule, args: argparse.Namespace) -> Outcome:
    H = _parse_subgroup(G, args.subgroup)
    Q = QuotientGroup(G, H)
    rng = random.Random(args.seed)
    descriptor = h2_bruteforce(Q, A)
    for sample in range(args.samples):
        w = random_cocycle(Q, A, rng, descriptor=descriptor)
        c2 = inflate(w) + coboundary(random_cochain(G, A, 1, rng))
        outcome = infres_invert(G, H, A, c2)
        if solve_coboundary(outcome.u - w) is None:
            raise PropositionViolationError(f"recovered class differs from the inflated one on sample {sample}")
        infres_b_via_dimshift(G, H, A, c2)
    result = {"subgroup": args.subgroup, "samples": str(args.samples), "seed": str(args.seed),
              "quotient_h2": _descriptor_dict(descriptor)}
    verification = {"check": "u ~ w after Inf-Res inversion", "ok": True, "checked": str(args.samples),
                    "witness": None}
    return result, verification, EXIT_OK


COHOMOLOGY_OPS: Dict[str, Callable[[AbelianPresentation, FiniteGModule, argparse.Namespace], Outcome]] = {
    "h1": _op_h,
    "h2": _op_h,
    "genchange": _op_genchange,
    "cup": _op_cup,
    "dimshift": _op_dimshift,
    "infres": _op_infres,
}


def cmd_cohomology(args: argparse.Namespace) -> Outcome:
    G = AbelianPresentation.parse(args.group)
    if args.module:
        A = module_from_dict(PersistenceManager().load_document(args.module), G)
    else:
        A = FiniteGModule.trivial(G, [0])
    result, verification, code = COHOMOLOGY_OPS[args.op](G, A, args)
    result.update(group=G.encode(), module=module_to_dict(A), op=args.op)
    return result, verification, code


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--output", help="write the document here instead of stdout")
    parser.add_argument("--no-timing", action="store_true", help="omit the timing block")
    parser.add_argument("--jobs", type=int, default=None, help="workers for cocycle sweeps")


def _add_spec(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int)
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--n", type=int, default=1, help="unramified degree")
    parser.add_argument("--e", type=int, default=1, help="tame ramification index")
    parser.add_argument("--f", type=int, default=1, help="tame residue degree")
    parser.add_argument("--nu", type=int, default=0, help="cyclotomic level p^nu")
    parser.add_argument("--prec", type=int, default=None, help="requested p-adic digits")
    parser.add_argument("--unit", type=int, default=1, help="tame radicand twist u in Y^e = u·p")
    parser.add_argument("--route", choices=("general", "tame"), default="general")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fundclass", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    compute = sub.add_parser("compute", help="fundamental class tuple of an extension")
    _add_spec(compute)
    _add_common(compute)
    compute.set_defaults(func=cmd_compute)

    verify = sub.add_parser("verify", help="re-verify a tuple or cocycle document")
    verify.add_argument("--input", required=True)
    _add_common(verify)
    verify.set_defaults(func=cmd_verify)

    artin = sub.add_parser("artin", help="Artin table and evaluation")
    artin.add_argument("--input", help="tuple document; otherwise computed from the spec flags")
    artin.add_argument("--element", help='decimal integer or "p^k*u"')
    _add_spec(artin)
    _add_common(artin)
    artin.set_defaults(func=cmd_artin)

    cohomology = sub.add_parser("cohomology", help="brute-force cohomology oracle")
    cohomology.add_argument("--group", required=True, help='presentation such as "4" or "2x2"')
    cohomology.add_argument("--module", help="module JSON {factors, actions}; default trivial Z")
    cohomology.add_argument("--op", choices=sorted(COHOMOLOGY_OPS), required=True)
    cohomology.add_argument("--k", type=int, default=None)
    cohomology.add_argument("--samples", type=int, default=20)
    cohomology.add_argument("--seed", type=int, default=0)
    cohomology.add_argument("--subgroup", help='generators separated by ";", e.g. "2,0;0,1"')
    _add_common(cohomology)
    cohomology.set_defaults(func=cmd_cohomology)

    expand = sub.add_parser("expand", help="tuple document to cocycle document")
    expand.add_argument("--input", required=True)
    _add_common(expand)
    expand.set_defaults(func=cmd_expand)
    return parser


def _command_echo(args: argparse.Namespace) -> Dict[str, str]:
    skip = {"func", "output", "no_timing", "format"}
    return {k: str(v) for k, v in sorted(vars(args).items()) if v is not None and k not in skip}


def parse_and_dispatch(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    start = time.perf_counter()
    try:
        result, verification, code = args.func(args)
        elapsed = None if args.no_timing else time.perf_counter() - start
        document = build_document(_command_echo(args), result, verification, elapsed)
        text = emit(document, args.format)
        if args.output:
            PersistenceManager().write_text(text, args.output)
        else:
            sys.stdout.write(text)
        return code
    except FundclassError as e:
        logger.error(f"{args.subcommand} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    except ValueError as e:
        logger.error(f"{args.subcommand} rejected its configuration: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except Exception as e:
        logger.exception(f"{args.subcommand} crashed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VERIFICATION


def main():
    """Load .env, configure logging and dispatch"""
    load_dotenv()
    try:
        config = Config()
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        sys.exit(EXIT_INPUT)

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        handlers.insert(0, logging.FileHandler(config.LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
