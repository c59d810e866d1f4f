"""Command-line front end: ``rootgrade <group> <command> [options]``.

Every run prints one document. JSON output carries a header with the full
configuration; exit status is 0 on success, 1 when a verification fails
(the document then contains the failing witness) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import borel, chevalley, reduction, spectra, steinberg, unitary, weylgraph
from .rings import RingError, parse_ring
from .rootsys import RootSystem, system_from_label

OUTPUT_DIR_VARIABLE = "ROOTGRADE_OUTPUT_DIR"


class UsageError(Exception):
    pass


class Outcome:
    """Result of a command: a JSON-able payload, success flag, optional text rendering."""

    def __init__(self, payload, ok: bool = True, text: str | None = None):
        self.payload = payload
        self.ok = ok
        self.text = text


# -- argument helpers -------------------------------------------------------------------------


def _system(args) -> RootSystem:
    if getattr(args, "file", None):
        data = json.loads(Path(args.file).read_text())
        return RootSystem.from_json(data)
    if not args.system:
        raise UsageError("--system (or --file) is required")
    try:
        return system_from_label(args.system)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _ring(args):
    if not args.ring:
        raise UsageError("--ring is required")
    try:
        return parse_ring(args.ring)
    except (RingError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _model(args) -> steinberg.GradedGroupModel:
    model = steinberg.elementary_chevalley_model(_system(args), _ring(args))
    model.cap = args.cap
    return model


def _vector(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x.strip()) for x in text.strip("()[] ").split(","))


def _labels(system: RootSystem, mask: int) -> list[str]:
    return ["(" + ",".join(str(x) for x in system.roots[i]) + ")" for i in system.members(mask)]


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


# -- roots ------------------------------------------------------------------------------------


def cmd_roots_build(args) -> Outcome:
    system = _system(args)
    return Outcome({"system": system.to_json(), "size": len(system.roots), "rank": system.rank})


def cmd_roots_check(args) -> Outcome:
    try:
        system = _system(args)
    except (ValueError, KeyError) as exc:
        return Outcome({"valid": False, "error": str(exc)}, ok=False)
    form = system.form
    problems = form.problems(system) if form is not None else ["no admissible form known"]
    payload = {"valid": not problems, "label": system.label, "size": len(system.roots), "rank": system.rank,
               "reduced": system.is_reduced(), "regular": system.is_regular(),
               "irreducible": system.is_irreducible(), "form_problems": problems}
    return Outcome(payload, ok=not problems)


# -- borel ------------------------------------------------------------------------------------


def cmd_borel_enumerate(args) -> Outcome:
    system = _system(args)
    enum = borel.enumerate_borel_sets(system)
    sets = [{"id": b.id, "positives": _labels(system, b.positives),
             "functional": [str(x) for x in b.representative]} for b in enum.borel_sets]
    return Outcome({"system": system.label, "count": len(enum), "borel_sets": sets})


def cmd_borel_core(args) -> Outcome:
    system = _system(args)
    enum = borel.enumerate_borel_sets(system)
    ids = range(len(enum)) if args.all or args.id is None else [args.id]
    rows = []
    for i in ids:
        if not 0 <= i < len(enum):
            raise UsageError(f"Borel set id {i} out of range 0..{len(enum) - 1}")
        b = enum.borel_sets[i]
        rows.append({"id": i, "positives": _labels(system, b.positives),
                     "boundary": _labels(system, enum.boundary(i)), "core": _labels(system, enum.core(i))})
    return Outcome({"system": system.label, "borel_sets": rows})


# -- weyl -------------------------------------------------------------------------------------


def _graph(args, flavor: str | None = None) -> weylgraph.WeylGraph:
    flavor = flavor or args.flavor
    system = _system(args)
    return weylgraph.large_weyl_graph(system) if flavor == "large" else weylgraph.small_weyl_graph(system)


def _graph_payload(graph: weylgraph.WeylGraph) -> dict:
    return {"flavor": graph.flavor, "vertices": graph.order, "edges": [list(e) for e in graph.edges],
            "degrees": graph.degrees(), "connected": graph.is_connected()}


def cmd_weyl_large(args) -> Outcome:
    graph = _graph(args, "large")
    identity = weylgraph.large_graph_identity_holds(graph)
    payload = _graph_payload(graph) | {"adjacency_identity": identity}
    return Outcome(payload, ok=identity, text=graph.to_dot() if args.format == "dot" else None)


def cmd_weyl_small(args) -> Outcome:
    graph = _graph(args, "small")
    payload = _graph_payload(graph)
    return Outcome(payload, ok=graph.is_connected(), text=graph.to_dot() if args.format == "dot" else None)


def cmd_weyl_spectrum(args) -> Outcome:
    graph = _graph(args)
    spectrum = weylgraph.laplacian_spectrum(graph)
    text = weylgraph.spectrum_csv(spectrum) if args.format == "csv" else None
    return Outcome({"flavor": graph.flavor, "vertices": graph.order, "spectrum": spectrum.as_dict()}, text=text)


def cmd_weyl_diameter(args) -> Outcome:
    graph = _graph(args, args.flavor or "small")
    connected = graph.is_connected()
    diameter = graph.diameter() if connected else None
    payload = {"flavor": graph.flavor, "vertices": graph.order, "connected": connected, "diameter": diameter,
               "diameter_at_most_3": diameter is not None and diameter <= 3}
    return Outcome(payload, ok=connected)


def cmd_weyl_path_constant(args) -> Outcome:
    pc = weylgraph.path_constant(_system(args), args.routing)
    payload = {"routing": pc.routing, "C": str(pc.constant), "D": str(pc.edge_factor), "A": str(pc.a_constant),
               "B": str(pc.b_constant), "small_edges": pc.small_edge_count}
    return Outcome(payload)


# -- reduce -----------------------------------------------------------------------------------


def _reduction(args) -> reduction.Reduction:
    if args.builtin:
        try:
            return reduction.builtin(args.builtin, args.n, args.i, args.j)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if not args.matrix:
        raise UsageError("--builtin or --matrix is required")
    rows = json.loads(args.matrix)
    target = system_from_label(args.target) if args.target else None
    try:
        return reduction.apply_reduction(rows, _system(args), target, args.name or "reduction", args.k or 2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_reduce_apply(args) -> Outcome:
    red = _reduction(args)
    payload = red.describe() | {"induced": [[str(x) for x in r] for r in red.induced.roots],
                                "fibers": {"(" + ",".join(str(x) for x in red.induced.roots[j]) + ")":
                                           [[str(x) for x in red.source.roots[i]] for i in members]
                                           for j, members in red.fibers.items()}}
    return Outcome(payload)


def cmd_reduce_check_good(args) -> Outcome:
    red = _reduction(args)
    result = reduction.is_k_good(red, args.k, args.all_witnesses)
    problems = reduction.verify_certificate(red, result) if result.good else []
    payload = {"reduction": red.describe(), "certificate": result.to_json(), "certificate_problems": problems}
    return Outcome(payload, ok=result.good and not problems)


def cmd_reduce_catalog(args) -> Outcome:
    rows = []
    ok = True
    for red in reduction.catalog_instances(args.max_rank):
        result = reduction.is_k_good(red)
        ok &= result.good
        rows.append({"name": red.name, "k": result.k, "good": result.good, "failure": result.failure})
    return Outcome({"max_rank": args.max_rank, "reductions": rows}, ok=ok)


# -- chevalley --------------------------------------------------------------------------------


def _table(args):
    system = _system(args)
    table = chevalley.chevalley_basis(system)
    if system.rank == 2:
        table = chevalley.normalize_rank2_signs(table)
    return table


def cmd_chevalley_table(args) -> Outcome:
    table = _table(args)
    problems = table.problems() + table.jacobi_failures()
    text = table.to_csv() if args.format == "csv" else None
    rows = [{"a": list(map(str, table.roots[a])), "b": list(map(str, table.roots[b])), "N": table.bracket_constant(a, b)}
            for a in range(len(table.roots)) for b in range(len(table.roots))
            if table.sum_index(a, b) is not None]
    return Outcome({"system": table.system.label, "constants": rows, "problems": problems}, ok=not problems, text=text)


def cmd_chevalley_verify_rank2(args) -> Outcome:
    table = _table(args)
    checks = [c.as_dict() for c in chevalley.verify_rank2_catalog(table)]
    extra = {}
    if chevalley.rank2_type(table.system) == "B2":
        extra["t2"] = chevalley.t2_identity_holds(table)
    ok = all(c["holds"] for c in checks) and all(extra.values())
    return Outcome({"system": table.system.label, "identities": checks} | extra, ok=ok)


def cmd_chevalley_exponential(args) -> Outcome:
    table = _table(args)
    system = table.system
    try:
        root = system.index[_vector(args.root)] if args.root else 0
    except KeyError as exc:
        raise UsageError(f"{args.root} is not a root of {system.label}") from exc
    group = chevalley.AdjointGroup(table)
    ok = chevalley.one_parameter_identity_holds(group, root)
    exp = chevalley.adjoint_exponential(table, root)
    return Outcome({"root": [str(x) for x in system.roots[root]], "nilpotency_index": group.nilpotency_index(root),
                    "one_parameter_identity": ok, "exponential": exp.to_json()}, ok=ok)


# -- steinberg --------------------------------------------------------------------------------


def _any_model(args) -> steinberg.GradedGroupModel:
    if args.model:
        spec = json.loads(Path(args.model).read_text()) if Path(args.model).exists() else json.loads(args.model)
        try:
            model = unitary.build_model(spec)
        except (ValueError, KeyError) as exc:
            raise UsageError(str(exc)) from exc
        model.cap = args.cap
        return model
    return _model(args)


def cmd_steinberg_model(args) -> Outcome:
    model = _any_model(args)
    try:
        size = len(model.full_group())
    except steinberg.ClosureOverflow as exc:
        return Outcome({"model": model.summary(), "overflow": str(exc)}, ok=False)
    failures = model.subgroup_failures() + [str(f) for f in model.grading_failures(first_only=True)]
    return Outcome({"model": model.summary(), "order": size, "grading_failures": failures}, ok=not failures)


def cmd_steinberg_strong(args) -> Outcome:
    model = _any_model(args)
    report = model.strong_report()
    normality = model.core_normality_failures()
    report["core_normality_failures"] = normality
    return Outcome(report, ok=report["strong"] and not normality)


def cmd_steinberg_generators(args) -> Outcome:
    model = _model(args)
    ring = model.ring
    T = [ring.parse(t) for t in args.T.split(",")] if args.T else [ring.one]
    sigma = steinberg.standard_generators(model.system, ring, T)
    report = steinberg.verify_generation(model, sigma, args.method)
    payload = {"case": steinberg.standard_generator_case(model.system),
               "sigma": [[model.root_label(g.root), ring.label(g.param)] for g in sigma], "report": report.to_json()}
    return Outcome(payload, ok=report.generated)


def cmd_steinberg_unitary(args) -> Outcome:
    ring = _ring(args)
    if args.odd:
        model = unitary.odd_unitary_model(args.n, ring)
        relations = unitary.odd_relations(model, args.e3)
    else:
        try:
            model = unitary.unitary_steinberg_model(args.n, ring, args.omega)
        except unitary.UnitaryError as exc:
            raise UsageError(str(exc)) from exc
        relations = unitary.even_relations(model)
    reports = unitary.check_relations(model, relations, samples=args.samples, seed=args.seed)
    ok = all(r.failures == 0 for r in reports)
    return Outcome({"model": model.name, "relations": [r.to_json() for r in reports]}, ok=ok)


def cmd_steinberg_identities(args) -> Outcome:
    g2_ring = parse_ring(args.ring) if args.ring else None
    results = steinberg.verify_named_identities(g2_ring=g2_ring)
    return Outcome({"identities": [r.to_json() for r in results]}, ok=all(r.holds for r in results))


# -- spectra ----------------------------------------------------------------------------------


def cmd_spectra_codist(args) -> Outcome:
    if args.heisenberg:
        group, a, b, _ = spectra.heisenberg_group(args.heisenberg)
        subgroups = [a, b]
    elif args.abelian:
        moduli = [int(m) for m in args.abelian.split(",")]
        group = spectra.FiniteGroup.abelian(moduli)
        subgroups = []
        for i in range(len(moduli)):
            unit = [0] * len(moduli)
            unit[i] = 1
            subgroups.append(group.generated([group.abelian_element(moduli, unit)]))
    else:
        model = _model(args)
        group = spectra.FiniteGroup.from_matrices(model.ring, model.full_group(), model.name)
        subgroups = [group.indices_of(model.closure([r])) for r in sorted(model.subgroups)]
    report = spectra.group_codistance(group, subgroups, blocks=group.order <= 1000, seed=args.seed)
    oracle = spectra.codistance_alternating(
        [spectra.RepresentationModel.regular(group).reduced_projector(h) for h in subgroups],
        projectors=True, seed=args.seed)
    agree = abs(oracle - report.value) <= args.tolerance * 1e3
    return Outcome({"group": group.name, "order": group.order, "codistance": report.to_json(),
                    "alternating_oracle": oracle, "oracle_agrees": agree}, ok=agree)


def cmd_spectra_bounds(args) -> Outcome:
    if not args.name:
        return Outcome({"bounds": {name: {"parameters": list(b.parameters), "statement": b.statement}
                                   for name, b in spectra.BOUNDS.items()}})
    inputs = json.loads(args.inputs or "{}")
    try:
        value = spectra.evaluate_bound(args.name, inputs)
    except spectra.SpectraError as exc:
        return Outcome({"bound": args.name, "inputs": inputs, "error": str(exc)}, ok=False)
    return Outcome({"bound": args.name, "inputs": inputs, "value": str(value), "numeric": float(value)})


def cmd_spectra_pipeline(args) -> Outcome:
    report = spectra.spectral_pipeline(_model(args), seed=args.seed, samples=args.samples, tolerance=args.tolerance)
    return Outcome(report.to_json(), ok=report.holds)


def cmd_spectra_hs_suite(args) -> Outcome:
    report = spectra.hs_lemma_suite(seed=args.seed)
    return Outcome(report.to_json(), ok=report.holds)


# -- parser -----------------------------------------------------------------------------------


COMMANDS: dict[tuple[str, str], Callable] = {
    ("roots", "build"): cmd_roots_build, ("roots", "check"): cmd_roots_check,
    ("borel", "enumerate"): cmd_borel_enumerate, ("borel", "core"): cmd_borel_core,
    ("weyl", "large"): cmd_weyl_large, ("weyl", "small"): cmd_weyl_small, ("weyl", "spectrum"): cmd_weyl_spectrum,
    ("weyl", "diameter"): cmd_weyl_diameter, ("weyl", "path-constant"): cmd_weyl_path_constant,
    ("reduce", "apply"): cmd_reduce_apply, ("reduce", "check-good"): cmd_reduce_check_good,
    ("reduce", "catalog"): cmd_reduce_catalog,
    ("chevalley", "table"): cmd_chevalley_table, ("chevalley", "verify-rank2"): cmd_chevalley_verify_rank2,
    ("chevalley", "exponential"): cmd_chevalley_exponential,
    ("steinberg", "model"): cmd_steinberg_model, ("steinberg", "strong"): cmd_steinberg_strong,
    ("steinberg", "generators"): cmd_steinberg_generators, ("steinberg", "unitary"): cmd_steinberg_unitary,
    ("steinberg", "identities"): cmd_steinberg_identities,
    ("spectra", "codist"): cmd_spectra_codist, ("spectra", "bounds"): cmd_spectra_bounds,
    ("spectra", "pipeline"): cmd_spectra_pipeline, ("spectra", "hs-suite"): cmd_spectra_hs_suite,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--system", help="root system label such as A2, BC3, G2")
    common.add_argument("--file", help="root system JSON file")
    common.add_argument("--builtin", help="catalog reduction such as F4-G2 or B4-B2")
    common.add_argument("--ring", help="ring such as F2, Z/4, F9*, F2[t]/(t^2)")
    common.add_argument("--model", help="model JSON (file path or inline)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker bound (computations here run serially)")
    common.add_argument("--format", choices=("json", "dot", "csv"), default="json")
    common.add_argument("--tolerance", type=float, default=spectra.TOLERANCE)
    common.add_argument("--cap", type=int, default=steinberg.DEFAULT_CAP)
    common.add_argument("--output", help="write the document to this file")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-identical output")

    parser = _Parser(prog="rootgrade", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    subs = {}
    for (group, command) in COMMANDS:
        if group not in subs:
            subs[group] = groups.add_parser(group).add_subparsers(dest="command", required=True, parser_class=_Parser)
        p = subs[group].add_parser(command, parents=[common])
        _command_options(group, command, p)
    return parser


def _command_options(group: str, command: str, p: argparse.ArgumentParser) -> None:
    if (group, command) == ("borel", "core"):
        p.add_argument("--all", action="store_true")
        p.add_argument("--id", type=int)
    if group == "weyl":
        p.add_argument("--flavor", choices=("large", "small"), default=None if command == "diameter" else "large")
        p.add_argument("--routing", choices=("optimal", "uniform", "lowest"), default="optimal")
    if group == "reduce":
        p.add_argument("--matrix", help="JSON list of rows")
        p.add_argument("--target", help="expected induced system label")
        p.add_argument("--name")
        p.add_argument("--n", type=int)
        p.add_argument("--i", type=int)
        p.add_argument("--j", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--all-witnesses", action="store_true")
        p.add_argument("--max-rank", type=int, default=4)
    if group == "chevalley":
        p.add_argument("--root", help="root as comma-separated coordinates")
    if group == "steinberg":
        p.add_argument("--T", help="comma-separated ring generators (first is 1)")
        p.add_argument("--method", choices=("auto", "closure", "borel"), default="auto")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--omega", default="1")
        p.add_argument("--odd", action="store_true")
        p.add_argument("--e3", choices=("minus_st", "st_star"), default="minus_st")
        p.add_argument("--samples", type=int, default=unitary.SAMPLES)
    if group == "spectra":
        p.add_argument("--name", help="bound name")
        p.add_argument("--inputs", help="JSON object of bound inputs")
        p.add_argument("--samples", type=int, default=50)
        p.add_argument("--heisenberg", type=int, help="prime p for the Heisenberg group over F_p")
        p.add_argument("--abelian", help="comma-separated moduli; coordinate subgroups")


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("no_timestamp",)}


def _render(args, outcome: Outcome) -> str:
    if outcome.text is not None and args.format in ("dot", "csv"):
        return outcome.text if outcome.text.endswith("\n") else outcome.text + "\n"
    doc = {"command": f"{args.group} {args.command}", "config": _config(args), "ok": outcome.ok,
           "result": outcome.payload}
    if not args.no_timestamp:
        doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        outcome = COMMANDS[(args.group, args.command)](args)
    except UsageError as exc:
        print(json.dumps({"ok": False, "usage_error": str(exc)}), file=stderr)
        return 2
    text = _render(args, outcome)
    if args.output:
        target = Path(args.output)
        if not target.is_absolute() and os.environ.get(OUTPUT_DIR_VARIABLE):
            target = Path(os.environ[OUTPUT_DIR_VARIABLE]) / target
        target.write_text(text)
    else:
        stdout.write(text)
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
