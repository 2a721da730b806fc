"""Command-line front end: file-based, reproducible workflows.

Exit status: 0 on success, 1 when a fusion run ends in status ``failed``,
2 on unreadable input or malformed arguments.
"""
from __future__ import annotations

import argparse
import sys

from .algebra import AlgebraError, BasedAlgebra, basis_vector, parse_tensor
from .engine import (
    minimal_isolating_fusion,
    minimal_isolating_semifusion,
)
from .lattice import (
    build_fusion_lattice,
    enumerate_seed_fusions,
    fingerprint,
    random_seed_search,
)
from .orbitals import (
    GroupError,
    coset_permutation_action,
    orbital_configuration,
    parse_perm_group,
    regular_action,
    semidirect_group,
)
from .partitions import PartitionError, parse_seed_family
from .polynomials import PolynomialError, factor_over_rationals
from .eigen import cyclotomic_verdict, is_diagonalizable, minimal_polynomial
from .reports import (
    dump_json,
    emit_lattice_dot,
    eigen_report,
    fusion_report,
    provenance,
    records_report,
    validate_report,
)
from .schemes import (
    SchemeError,
    algebra_from_relations,
    format_relation_matrix,
    fuse_relations,
    parse_relation_matrix,
)

USAGE_ERROR = 2
FAIL_STATUS = 1


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_algebra(path: str):
    """Sniff tensor vs relation-matrix input; returns (algebra, matrix-or-None)."""
    text = _read(path)
    head = text.lstrip().split(None, 1)
    if head and head[0].lower() == "basedalgebra":
        return parse_tensor(text), None
    matrix = parse_relation_matrix(text)
    return algebra_from_relations(matrix), matrix


def _write(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)


def _check_seeds(alg: BasedAlgebra, seed_text: str):
    try:
        fam = parse_seed_family(seed_text)
    except PartitionError as exc:
        raise InputError(f"bad seed string: {exc}") from exc
    for s in fam:
        for i in s:
            if not 0 <= i < alg.rank:
                raise InputError(f"seed index {i} out of range for rank {alg.rank}")
    return fam


def cmd_fuse(args, command_line: str) -> int:
    alg, matrix = _load_algebra(args.scheme)
    fam = _check_seeds(alg, args.seed)
    strict = not args.relaxed
    if args.mode == "fusion":
        outcome = minimal_isolating_fusion(alg, fam, strict=strict)
    else:
        outcome = minimal_isolating_semifusion(alg, fam, strict=strict)
    meta = provenance(command_line, [args.scheme])
    meta["seeds"] = str(fam)
    meta["mode"] = args.mode
    meta["strict"] = strict
    fp = fingerprint(alg, outcome.partition) if outcome.ok else None
    _write(args.out, dump_json(fusion_report(outcome, fp, meta)))
    if args.out_matrix and outcome.ok:
        if matrix is None:
            raise InputError("--out-matrix needs a relation-matrix input, not a tensor")
        _write(args.out_matrix, format_relation_matrix(fuse_relations(matrix, outcome.partition)))
    return FAIL_STATUS if not outcome.ok else 0


def cmd_lattice(args, command_line: str) -> int:
    alg, _ = _load_algebra(args.scheme)
    records = enumerate_seed_fusions(
        alg, args.max_seed_size, multi=args.multi, jobs=args.jobs
    )
    meta = provenance(command_line, [args.scheme])
    meta["max_seed_size"] = args.max_seed_size
    meta["multi"] = args.multi
    _write(args.out_json, dump_json(records_report(alg, records, meta)))
    graph = build_fusion_lattice(alg, [rec.partition for rec in records])
    _write(args.out_dot, emit_lattice_dot(graph))
    return 0


def cmd_orbitals(args, command_line: str) -> int:
    if args.semidirect:
        try:
            m, k, a, b, c, d = (int(t) for t in args.semidirect.split(","))
        except ValueError as exc:
            raise InputError(f"bad --semidirect spec {args.semidirect!r}") from exc
        group = semidirect_group(m, k, [[a, b], [c, d]])
        if args.subgroup:
            sub = []
            for chunk in args.subgroup.split(";"):
                try:
                    ea, eb, ec = (int(t) for t in chunk.split(","))
                except ValueError as exc:
                    raise InputError(f"bad subgroup element {chunk!r}") from exc
                sub.append(((ea % max(m, 1), eb % max(m, 1)), ec % k))
            action = coset_permutation_action(group, sub)
        else:
            action = regular_action(group)
    elif args.group:
        action = parse_perm_group(_read(args.group))
    else:
        raise InputError("orbitals requires --group FILE or --semidirect m,k,a,b,c,d")
    matrix = orbital_configuration(action)
    _write(args.out, format_relation_matrix(matrix))
    return 0


def cmd_eigen(args, command_line: str) -> int:
    alg, _ = _load_algebra(args.scheme)
    if args.element:
        fam = _check_seeds(alg, args.element)
        vectors = [(str(fam), [1 if i in set().union(*map(set, fam)) else 0 for i in range(alg.rank)])]
    else:
        vectors = [(str(i), basis_vector(alg.rank, i)) for i in range(alg.rank)]
    entries = []
    for label, vec in vectors:
        mp = minimal_polynomial(alg, vec)
        factors = factor_over_rationals(mp)
        entries.append(
            {
                "element": label,
                "minimal_polynomial": str(mp),
                "diagonalizable": is_diagonalizable(alg, vec),
                "factors": [
                    {
                        "polynomial": str(f),
                        "multiplicity": mult,
                        "verdict": cyclotomic_verdict(f).value,
                        "reason": cyclotomic_verdict(f).reason,
                    }
                    for f, mult in factors
                ],
            }
        )
    meta = provenance(command_line, [args.scheme])
    _write(args.out, dump_json(eigen_report(entries, meta)))
    return 0


def cmd_validate(args, command_line: str) -> int:
    meta = provenance(command_line, [args.scheme])
    text = _read(args.scheme)
    head = text.lstrip().split(None, 1)
    try:
        if head and head[0].lower() == "basedalgebra":
            alg = parse_tensor(text)
            from .algebra import build_algebra

            build_algebra(
                {(i, j, k): v for i, j, k, v in alg.items()},
                alg.identity_support,
                star=alg.star,
                rank=alg.rank,
                validate=True,
            )
            summary = {"kind": "tensor", "rank": alg.rank, "nonzeros": alg.num_nonzero()}
            report = validate_report(meta, kind="tensor", ok=True, detail="identity and associativity laws hold", summary=summary)
        else:
            matrix = parse_relation_matrix(text)
            alg = algebra_from_relations(matrix)
            summary = {
                "kind": "relation-matrix",
                "order": matrix.order,
                "rank": matrix.rank,
                "fibers": len(matrix.diagonal_colors()),
            }
            report = validate_report(meta, kind="relation-matrix", ok=True, detail="coherent configuration", summary=summary)
    except (SchemeError, AlgebraError) as exc:
        report = validate_report(meta, kind="input", ok=False, detail=str(exc), summary={})
        _write(args.out, dump_json(report))
        return FAIL_STATUS
    _write(args.out, dump_json(report))
    return 0


def cmd_search(args, command_line: str) -> int:
    alg, _ = _load_algebra(args.scheme)
    lo, hi = (int(t) for t in args.size.split(","))
    records = random_seed_search(
        alg,
        samples=args.samples,
        size_range=(lo, hi),
        family_size=args.family_size,
        rng_seed=args.rng_seed,
        jobs=args.jobs,
    )
    meta = provenance(command_line, [args.scheme])
    meta["samples"] = args.samples
    meta["rng_seed"] = args.rng_seed
    meta["size_range"] = [lo, hi]
    meta["family_size"] = args.family_size
    _write(args.out, dump_json(records_report(alg, records, meta)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="isofusion", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="minimal isolating fusion/semifusion of a scheme or tensor")
    p.add_argument("--scheme", required=True, help="relation-matrix or tensor file")
    p.add_argument("--seed", required=True, help="seed family, e.g. '1,2,3' or '1;4,5'")
    p.add_argument("--mode", choices=["fusion", "semifusion"], default="fusion")
    p.add_argument("--relaxed", action="store_true", help="continue when a seed splits")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--out-matrix", default=None, help="also write the fused relation matrix here")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("lattice", help="enumerate seed fusions and build the lattice")
    p.add_argument("--scheme", required=True)
    p.add_argument("--max-seed-size", type=int, default=3)
    p.add_argument("--multi", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-json", default=None)
    p.add_argument("--out-dot", default=None)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("orbitals", help="two-orbit configuration of a permutation group")
    p.add_argument("--group", default=None, help="group file (degree/gen lines)")
    p.add_argument("--semidirect", default=None, help="m,k,M00,M01,M10,M11")
    p.add_argument("--subgroup", default=None, help="semicolon-separated elements a,b,c")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_orbitals)

    p = sub.add_parser("eigen", help="exact minimal polynomials and cyclotomicity verdicts")
    p.add_argument("--scheme", required=True)
    p.add_argument("--element", default=None, help="indices of a 0/1 element, e.g. '1,4'")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("validate", help="coherence/associativity validation of an input file")
    p.add_argument("--scheme", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("search", help="random seed search for fusions")
    p.add_argument("--scheme", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--rng-seed", type=int, required=True)
    p.add_argument("--size", default="1,3", help="lo,hi seed sizes")
    p.add_argument("--family-size", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_search)
    return top


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    command_line = "isofusion " + " ".join(argv)
    try:
        return args.func(args, command_line)
    except (InputError, SchemeError, AlgebraError, PartitionError, GroupError, PolynomialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
