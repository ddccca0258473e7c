"""Command-line surface: analyze | closure | construct | approximate | verify.

Reports are JSON objects printed to stdout with ``--json`` (sorted keys,
two-space indent) and are byte-identical across repeated runs; timing goes
to stderr only.  Exit codes: 0 success, 2 parse/input error, 3 search or
order budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional

from .components import class_partition, _restrict_unchecked
from .constructors import (
    construct_from_bipartite,
    construct_idempotent,
    finite_approximant,
    parse_construction_spec,
)
from .errors import OrderCapExceeded, SearchBudgetExceeded
from .matrix import TropMatrix, is_idempotent, monomial_eigenvalue, parse_matrix
from .pairsearch import DEFAULT_MAX_NODES, NotConnected
from .permgroups import (
    PairedPermGroup,
    Perm,
    PermGroup,
    format_cycles,
    paired_two_closure,
    parse_cycles,
    two_closure,
)
from .semiring import Value, format_scalar
from .spaces import h_related, has_full_rank, reduce_full_rank
from .stabilizer import (
    classification_conditions,
    commuting_units,
    group_description,
    maximal_subgroup,
    normalize_eigenvectors,
    _connected_sigma,
)

PARSE_ERROR = 2
BUDGET_ERROR = 3


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _print_report(report: dict, as_json: bool, human_lines: list[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _read_matrix(path: str) -> tuple[TropMatrix, str]:
    with open(path, "rb") as fh:
        raw = fh.read()
    return parse_matrix(raw.decode()), _digest(raw)


def _unit_json(unit) -> dict:
    return {
        "sigma": format_cycles(Perm(unit.sigma)),
        "scalings": [format_scalar(s) for s in unit.scalings],
    }


def _component_json(part) -> list[dict]:
    out = []
    for idx, comp in enumerate(part.components):
        cls_index, member_pos = next(
            (k, cls.members.index(idx))
            for k, cls in enumerate(part.classes)
            if idx in cls.members
        )
        out.append(
            {
                "rows": [i + 1 for i in comp.rows],
                "cols": [j + 1 for j in comp.cols],
                "class": cls_index,
                "witness": _unit_json(part.classes[cls_index].witnesses[member_pos]),
            }
        )
    return out


def cmd_analyze(args) -> int:
    a, digest = _read_matrix(args.path)
    t0 = time.perf_counter()
    if args.assume_idempotent:
        desc = maximal_subgroup(a, max_nodes=args.max_nodes)
    else:
        desc = group_description(a, max_nodes=args.max_nodes)
    z, rows_kept, cols_kept = reduce_full_rank(a)
    part = class_partition(z, max_nodes=args.max_nodes)
    conditions_ok = classification_conditions(desc, a.nrows, a.ncols)
    elapsed = time.perf_counter() - t0
    report = {
        "command": "analyze",
        "input": {
            "path": args.path,
            "sha256": digest,
            "rows": a.nrows,
            "cols": a.ncols,
        },
        "assume_idempotent": bool(args.assume_idempotent),
        "reduction": {
            "kept_rows": [i + 1 for i in rows_kept],
            "kept_cols": [j + 1 for j in cols_kept],
            "row_rank": z.nrows,
            "col_rank": z.ncols,
        },
        "components": _component_json(part),
        "description": desc.to_json_dict(),
        "verification": {"classification_conditions": conditions_ok},
    }
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    human = [
        f"{a.nrows}x{a.ncols} matrix, rank {z.nrows}x{z.ncols}, "
        f"{len(part.components)} component(s) in {len(part.classes)} class(es)",
        f"group: {desc.formula()}   (finite part order {desc.finite_order})",
    ]
    _print_report(report, args.json, human)
    return 0 if conditions_ok else 1


def _parse_gen_args(args) -> tuple:
    if args.bidegree:
        n, m = args.bidegree
        pairs = []
        for token in args.generators:
            if "|" not in token:
                raise ValueError(
                    "paired generators are written as 'left|right' cycle pairs"
                )
            left, right = token.split("|", 1)
            pairs.append((parse_cycles(left, n), parse_cycles(right, m)))
        return PairedPermGroup((n, m), pairs), True
    degree = args.degree
    if degree is None:
        raise ValueError("--degree or --bidegree is required")
    return PermGroup(degree, [parse_cycles(t, degree) for t in args.generators]), False


def cmd_closure(args) -> int:
    group, paired = _parse_gen_args(args)
    t0 = time.perf_counter()
    if paired:
        closure = paired_two_closure(group)
        closed = group.order(args.max_order) == closure.order(args.max_order)
        gens = [
            f"{format_cycles(g)}|{format_cycles(h)}" for g, h in closure.generators
        ]
        degrees = list(group.degrees)
    else:
        closure = two_closure(group)
        closed = group.order(args.max_order) == closure.order(args.max_order)
        gens = [format_cycles(g) for g in closure.generators]
        degrees = [group.degree]
    elapsed = time.perf_counter() - t0
    report = {
        "command": "closure",
        "paired": paired,
        "degrees": degrees,
        "input_generators": list(args.generators),
        "group_order": group.order(args.max_order),
        "closure_order": closure.order(args.max_order),
        "closure_generators": gens,
        "is_closed": closed,
    }
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    human = [
        f"order {report['group_order']}, closure order {report['closure_order']}, "
        f"closed = {str(closed).lower()}",
        "closure generators: " + (" ".join(gens) if gens else "()"),
    ]
    _print_report(report, args.json, human)
    return 0


def cmd_construct(args) -> int:
    from .graphs import ColouredDigraph
    from .permgroups import (
        coloured_automorphisms,
        coloured_bipartite_automorphisms,
        groups_isomorphic,
    )

    with open(args.spec, "rb") as fh:
        raw = fh.read()
    spec = json.loads(raw.decode())
    kind, obj = parse_construction_spec(spec)
    t0 = time.perf_counter()
    if kind == "bipartite":
        matrix = construct_from_bipartite(obj)
        desc = group_description(matrix)
        target = coloured_bipartite_automorphisms(obj.completed()).left_group()
    else:
        matrix = construct_idempotent(obj)
        desc = maximal_subgroup(matrix)
        target = obj if not isinstance(obj, ColouredDigraph) else coloured_automorphisms(obj)
    matches = len(desc.factors) == 1 and groups_isomorphic(
        desc.factors[0].finite_part, target
    )
    elapsed = time.perf_counter() - t0
    text = matrix.to_text() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    report = {
        "command": "construct",
        "input": {"path": args.spec, "sha256": _digest(raw)},
        "kind": kind,
        "matrix": matrix.to_json_dict(),
        "description": desc.to_json_dict(),
        "verification": {"group_matches_target": matches},
        "output": args.output,
    }
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    human = [text.rstrip("\n"), f"group: {desc.formula()}"]
    _print_report(report, args.json, human)
    return 0 if matches else 1


def cmd_approximate(args) -> int:
    a, digest = _read_matrix(args.path)
    f = finite_approximant(a, args.m)
    text = f.to_text() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    report = {
        "command": "approximate",
        "input": {"path": args.path, "sha256": digest},
        "m": args.m,
        "matrix": f.to_json_dict(),
        "output": args.output,
    }
    _print_report(report, args.json, [text.rstrip("\n")])
    return 0


def verify_flags(a: TropMatrix, max_nodes: int = DEFAULT_MAX_NODES) -> dict:
    """The full invariant suite on one matrix; every flag must be true."""
    flags: dict[str, bool] = {}
    flags["format_round_trip"] = parse_matrix(a.to_text()) == a
    z, _, _ = reduce_full_rank(a)
    flags["reduction_full_rank"] = has_full_rank(z)
    part = class_partition(z, max_nodes=max_nodes)
    restrs = [_restrict_unchecked(z, c) for c in part.components]
    flags["restrictions_full_rank"] = all(has_full_rank(r) for r in restrs)

    pair_ok = eigen_ok = closure_ok = agree_ok = h_ok = norm_ok = True
    zero = Value(0)
    for cls in part.classes:
        rep = restrs[cls.representative]
        elements = _connected_sigma(rep, max_nodes)
        ps = {el.P for el in elements}
        for el in elements:
            pair_ok &= el.P.left_apply(rep) == el.Q.right_apply(rep)
            h_ok &= h_related(el.P.left_apply(rep), rep)
            try:
                eigen_ok &= monomial_eigenvalue(el.P) == zero
                eigen_ok &= monomial_eigenvalue(el.Q) == zero
            except Exception:
                eigen_ok = False
        for x in ps:
            closure_ok &= x.invert() in ps
            for y in ps:
                closure_ok &= (x @ y) in ps
                for i in range(x.degree):
                    if x.sigma[i] == y.sigma[i]:
                        agree_ok &= x.scalings[i] == y.scalings[i]
        try:
            normalize_eigenvectors(rep, elements)
        except Exception:
            norm_ok = False
    flags["pair_equations"] = pair_ok
    flags["single_eigenvalue"] = eigen_ok
    flags["sigma_closure"] = closure_ok
    flags["position_agreement"] = agree_ok
    flags["h_related"] = h_ok
    flags["eigenvector_normalisation"] = norm_ok

    desc = group_description(a, max_nodes=max_nodes)
    flags["classification_conditions"] = classification_conditions(
        desc, a.nrows, a.ncols
    )

    if a.is_square() and is_idempotent(a):
        idem_ok = True
        for r in restrs:
            idem_ok &= is_idempotent(r)
            try:
                comm = commuting_units(r, max_nodes=max_nodes)
                sigma = _connected_sigma(r, max_nodes)
                idem_ok &= {el.P for el in comm} == {el.P for el in sigma}
            except NotConnected:
                pass
        flags["idempotent_restrictions"] = idem_ok
    return flags


def cmd_verify(args) -> int:
    a, digest = _read_matrix(args.path)
    t0 = time.perf_counter()
    flags = verify_flags(a, args.max_nodes)
    elapsed = time.perf_counter() - t0
    report = {
        "command": "verify",
        "input": {
            "path": args.path,
            "sha256": digest,
            "rows": a.nrows,
            "cols": a.ncols,
        },
        "verification": flags,
    }
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    human = [f"{name}: {str(ok).lower()}" for name, ok in flags.items()]
    _print_report(report, args.json, human)
    return 0 if all(flags.values()) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropgroups",
        description="Exact stabilizer groups of max-plus matrices",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; computation is sequential and deterministic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="group description of a matrix file")
    p.add_argument("path")
    p.add_argument("--assume-idempotent", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--max-order", type=int, default=10**6)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("closure", help="2-closure of a permutation group")
    p.add_argument("generators", nargs="*", help="cycle notation; pairs as 'l|r'")
    p.add_argument("--degree", type=int)
    p.add_argument("--bidegree", type=int, nargs=2, metavar=("N", "M"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-order", type=int, default=10**6)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("construct", help="witness matrix from a JSON spec")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("approximate", help="finite approximant of an idempotent")
    p.add_argument("path")
    p.add_argument("m", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("verify", help="run the invariant suite on a matrix")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SearchBudgetExceeded, OrderCapExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
