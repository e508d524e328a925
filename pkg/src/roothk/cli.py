"""Command-line interface: analyses and verification suites with deterministic
JSON or TSV reports.

Reports go to standard output and are byte-identical across reruns of the
same invocation; diagnostics (including timing) go to the error stream.
Every numeric value is an exact integer or an exact rational string "p/q".
Exit codes: 0 all runnable checks pass, 1 any check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import DiscriminantTooLargeError, RootHKError
from .exact_linalg import IntMatrix
from .hk_analysis import (
    RESOLUTION_CITATION,
    analyze,
    brute_force_fixed_point_count,
    fixed_locus_on_abelian,
    freeness_codim_check,
    resolution_verdict,
)
from .invariant_theory import invariant_report
from .lattice_tower import bc_tower, invariant_intermediate_lattices
from .root_data import (
    RootSystemSpec,
    build_root_datum,
    dual_lattice_quotient_check,
    specs_up_to_rank,
    standard_table,
)
from .weyl import GroupCap, element_iter, generate_group, group_order_formula

ENV_GROUP_CAP = "ROOTHK_GROUP_CAP"

_FIXED_LOCUS_GROUPS = (("A", 1), ("A", 2), ("B", 2), ("A", 3))
_FIXED_LOCUS_DET_BOUND = 8


def _render_value(v):
    if isinstance(v, bool):
        return 1 if v else 0
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, str):
        return v
    raise TypeError(f"report values must be exact integers, rationals or strings: got {type(v)!r}")


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | skipped
    values: dict
    citation: str = ""

    def rendered_values(self) -> dict:
        return {k: _render_value(v) for k, v in self.values.items()}


@dataclass
class ReportDocument:
    command: dict
    checks: list[CheckRecord] = field(default_factory=list)
    tool_version: str = __version__

    def add(self, name: str, status: str, values: dict, citation: str = "") -> None:
        self.checks.append(CheckRecord(name=name, status=status, values=values, citation=citation))

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    def to_json(self) -> str:
        doc = {
            "tool_version": self.tool_version,
            "command": self.command,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "values": c.rendered_values(),
                    "citation": c.citation,
                }
                for c in self.checks
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_tsv(self) -> str:
        lines = ["name\tstatus\tvalues\tcitation"]
        for c in self.checks:
            vals = ";".join(f"{k}={v}" for k, v in c.rendered_values().items())
            lines.append(f"{c.name}\t{c.status}\t{vals}\t{c.citation}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_tsv()


def resolve_group_cap(flag_value: int | None) -> GroupCap:
    """Group cap from the flag, falling back to the environment variable."""
    if flag_value is not None:
        return GroupCap(max_elements=flag_value)
    env = os.environ.get(ENV_GROUP_CAP)
    if env is not None:
        try:
            return GroupCap(max_elements=int(env))
        except ValueError as exc:
            raise UsageError(f"invalid {ENV_GROUP_CAP}={env!r}: {exc}") from exc
    return GroupCap()


class UsageError(Exception):
    pass


# --- subcommand bodies ----------------------------------------------------------


def cmd_analyze(family: str, rank: int, lattice: str, cap: GroupCap) -> ReportDocument:
    spec = RootSystemSpec(family, rank)
    doc = ReportDocument(
        command={"command": "analyze", "family": family, "rank": rank, "lattice": lattice}
    )
    verdict = analyze(spec, lattice, cap)
    doc.add(
        f"analyze/{spec.label}/irreducible",
        "pass" if verdict.irreducible else "fail",
        {"commutant_dim": 1 if verdict.irreducible else 0},
    )
    doc.add(
        f"analyze/{spec.label}/symplectic-form-dim",
        "pass" if verdict.symplectic_form_dim == 1 else "fail",
        {"dim": verdict.symplectic_form_dim},
    )
    free = verdict.freeness
    if free.status == "skipped":
        doc.add(
            f"analyze/{spec.label}/freeness-codim",
            "skipped",
            {"reason": free.reason},
        )
    else:
        doc.add(
            f"analyze/{spec.label}/freeness-codim",
            "pass" if free.verified_at_least_two else "fail",
            {"min_codim_doubled": free.min_codim_doubled},
        )
    doc.add(
        f"analyze/{spec.label}/resolution",
        "pass",
        {"verdict": verdict.resolution.value},
        citation=RESOLUTION_CITATION,
    )
    doc.add(
        f"analyze/{spec.label}/known-model",
        "pass",
        {"lattice": verdict.lattice_label, "model": verdict.known_model or ""},
    )
    return doc


def cmd_lemma_check(max_rank: int, cap: GroupCap) -> ReportDocument:
    doc = ReportDocument(command={"command": "lemma-check", "max_rank": max_rank})
    for spec in specs_up_to_rank(max_rank):
        report = invariant_report(build_root_datum(spec))
        doc.add(
            f"lemma/{spec.label}",
            "pass" if report.passed else "fail",
            {
                "sym2_inv": report.dim_sym2_inv,
                "wedge2_inv": report.dim_wedge2_inv,
                "wedge2_doubled_inv": report.dim_wedge2_doubled_inv,
                "irreducible": report.irreducible,
            },
        )
    return doc


def _tower_for(spec: RootSystemSpec, cap_elements: int = 10**6):
    if spec.family in ("B", "C"):
        if spec.rank < 3:
            raise UsageError(
                f"sublattice tower for {spec.label} needs the rank-{spec.rank} D lattice, "
                "which requires rank >= 3"
            )
        return bc_tower(spec, cap_elements)
    return invariant_intermediate_lattices(build_root_datum(spec), cap=cap_elements)


def cmd_sublattices(family: str, rank: int, cap: GroupCap) -> ReportDocument:
    spec = RootSystemSpec(family, rank)
    doc = ReportDocument(command={"command": "sublattices", "family": family, "rank": rank})
    try:
        tower = _tower_for(spec)
    except DiscriminantTooLargeError as exc:
        doc.add(f"sublattices/{spec.label}", "fail", {"reason": str(exc)})
        return doc
    doc.add(
        f"sublattices/{spec.label}/count",
        "pass",
        {"lattices": len(tower.lattices), "disc_order": tower.disc.order},
    )
    for lat in tower.lattices:
        doc.add(
            f"sublattices/{spec.label}/{lat.label}",
            "pass",
            {
                "index_over_root": lat.index_over_root,
                "subgroup_order": lat.subgroup_order,
                "gram_det": lat.gram.det(),
                "primitive_gram_det": lat.primitive_gram().det(),
            },
        )
    classes = "|".join(",".join(str(i) for i in cls) for cls in tower.rescaling_classes)
    doc.add(
        f"sublattices/{spec.label}/rescaling-classes",
        "pass",
        {"classes": classes, "inconclusive_pairs": len(tower.inconclusive_pairs)},
    )
    return doc


def _expected_resolution(family: str) -> str:
    return resolution_verdict(family).value


def cmd_report(suite: str, cap: GroupCap) -> ReportDocument:
    if suite != "default":
        raise UsageError(f"unknown suite {suite!r}; available: default")
    doc = ReportDocument(command={"command": "report", "suite": suite})
    group_cache: dict[tuple[str, int], object] = {}

    def get_group(spec: RootSystemSpec):
        key = (spec.family, spec.rank)
        if key not in group_cache:
            group_cache[key] = generate_group(build_root_datum(spec), cap)
        return group_cache[key]

    # Invariant dimensions and irreducibility across the whole table.
    for spec in standard_table():
        report = invariant_report(build_root_datum(spec))
        doc.add(
            f"lemma/{spec.label}",
            "pass" if report.passed else "fail",
            {
                "sym2_inv": report.dim_sym2_inv,
                "wedge2_inv": report.dim_wedge2_inv,
                "wedge2_doubled_inv": report.dim_wedge2_doubled_inv,
                "irreducible": report.irreducible,
            },
        )

    # Dual-lattice quotient model for type A.
    for n in range(1, 7):
        model = dual_lattice_quotient_check(n)
        doc.add(
            f"dual-quotient/A{n}",
            "pass" if model.passed else "fail",
            {
                "disc_order": model.n + 1,
                "cyclic": model.cyclic_of_expected_order,
                "gram_match": model.grams_match,
            },
        )

    # Sublattice towers.
    for n in range(1, 9):
        tower = _tower_for(RootSystemSpec("A", n))
        divisors = sum(1 for d in range(1, n + 2) if (n + 1) % d == 0)
        doc.add(
            f"towers/A{n}",
            "pass" if len(tower.lattices) == divisors else "fail",
            {"lattices": len(tower.lattices), "expected": divisors},
        )
    for n in range(3, 8):
        tower = _tower_for(RootSystemSpec("B", n))
        expected = (f"D{n}", f"Z^{n}", f"D{n}*")
        doc.add(
            f"towers/B{n}:D{n}",
            "pass" if tower.labels == expected else "fail",
            {"labels": ",".join(tower.labels)},
        )
    tower_e8 = _tower_for(RootSystemSpec("E", 8))
    doc.add(
        "towers/E8",
        "pass" if tower_e8.labels == ("E8",) else "fail",
        {"lattices": len(tower_e8.lattices)},
    )

    # Group orders and freeness, exhaustively where the cap allows.
    for spec in standard_table():
        order = group_order_formula(spec)
        name = f"freeness/{spec.label}"
        if order > cap.max_elements:
            doc.add(
                name,
                "skipped",
                {"order": order, "reason": f"order exceeds cap {cap.max_elements}"},
            )
            continue
        group = get_group(spec)
        check = freeness_codim_check(group, cap=cap)
        ok = group.element_count() == order and check.min_codim_doubled == 2
        doc.add(
            name,
            "pass" if ok else "fail",
            {
                "order": order,
                "enumerated": group.element_count(),
                "min_codim_doubled": check.min_codim_doubled,
            },
        )

    # Fixed-locus component counts against brute-force torus enumeration.
    for family, rank in _FIXED_LOCUS_GROUPS:
        spec = RootSystemSpec(family, rank)
        group = get_group(spec)
        compared = 0
        agree = True
        for idx, w in enumerate(element_iter(group)):
            det = (w - IntMatrix.identity(rank)).det()
            if det == 0 or abs(det) > _FIXED_LOCUS_DET_BOUND:
                continue
            entry = fixed_locus_on_abelian(w, element_id=str(idx))
            count = brute_force_fixed_point_count(w, abs(det))
            compared += 1
            if count != entry.component_count:
                agree = False
        doc.add(
            f"fixed-locus/{spec.label}",
            "pass" if agree and compared > 0 else "fail",
            {"elements_compared": compared, "all_equal": agree},
        )

    # Resolution verdict table.
    for family, expected in (
        ("A", "resolvable"),
        ("B", "resolvable"),
        ("C", "resolvable"),
        ("D", "not-resolvable"),
        ("E", "not-resolvable"),
        ("F", "not-resolvable"),
        ("G", "not-resolvable"),
        ("H", "out-of-scope"),
    ):
        verdict = resolution_verdict(family).value
        doc.add(
            f"resolution/{family}",
            "pass" if verdict == expected else "fail",
            {"verdict": verdict},
            citation=RESOLUTION_CITATION,
        )

    return doc


# --- entry point ----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--group-cap",
        type=int,
        default=None,
        help=f"element cap for exhaustive group enumeration (default 5000000; env {ENV_GROUP_CAP})",
    )
    shared.add_argument("--format", choices=("json", "tsv"), default="json")

    parser = argparse.ArgumentParser(
        prog="roothk",
        description="Exact verification toolkit for Weyl-group quotient constructions.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_analyze = sub.add_parser("analyze", parents=[shared], help="full verdict for one family and rank")
    p_analyze.add_argument("family", choices=list("ABCDEFG"))
    p_analyze.add_argument("rank", type=int)
    p_analyze.add_argument(
        "--lattice",
        default="root",
        help="lattice selector: root, dual, or index:k into the sublattice tower",
    )

    p_lemma = sub.add_parser("lemma-check", parents=[shared], help="invariant dimensions across the table")
    p_lemma.add_argument("--max-rank", type=int, default=8)

    p_sub = sub.add_parser("sublattices", parents=[shared], help="group-stable lattices between root and dual")
    p_sub.add_argument("family", choices=list("ABCDEFG"))
    p_sub.add_argument("rank", type=int)

    p_report = sub.add_parser("report", parents=[shared], help="run a verification suite")
    p_report.add_argument("--suite", default="default")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic_ns()
    try:
        cap = resolve_group_cap(args.group_cap)
        if args.subcommand == "analyze":
            if args.rank < 1:
                raise UsageError(f"rank must be positive, got {args.rank}")
            doc = cmd_analyze(args.family, args.rank, args.lattice, cap)
        elif args.subcommand == "lemma-check":
            if args.max_rank < 1:
                raise UsageError(f"--max-rank must be >= 1, got {args.max_rank}")
            doc = cmd_lemma_check(args.max_rank, cap)
        elif args.subcommand == "sublattices":
            doc = cmd_sublattices(args.family, args.rank, cap)
        else:
            doc = cmd_report(args.suite, cap)
    except (UsageError, ValueError) as exc:
        print(f"roothk: error: {exc}", file=sys.stderr)
        return 2
    except RootHKError as exc:
        print(f"roothk: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(doc.render(args.format))
    elapsed_ms = (time.monotonic_ns() - started) // 1_000_000
    print(f"roothk: {args.subcommand} finished in {elapsed_ms} ms", file=sys.stderr)
    return 1 if doc.failed else 0


if __name__ == "__main__":
    sys.exit(main())
