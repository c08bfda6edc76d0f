"""
Subcommand bodies. Each takes the parsed arguments, prints, and returns an exit code.
"""
import asyncio
import json
import logging
import os
import time
from pathlib import Path
from typing import Any

import report_card
from batch import BatchClassifier, exit_code
from descriptors import ValidationError, DocumentReader, describe, parse_descriptor
from glattice import h1, is_invertible
from intlinalg import snf
from laurent_forms import (
    DEFAULT_CHARACTERISTIC,
    DiagonalFormSpec,
    IsotropicWitness,
    anisotropy_criterion,
    isotropy_search,
)
from reductive import classify

logger = logging.getLogger(__name__)


def load_json_arg(value: str) -> Any:
    """Inline JSON, or the path of a file holding it."""
    if os.path.isfile(value):
        with open(value, "rb") as f:
            value = f.read().decode("utf-8")
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise ValidationError("argument", f"not JSON: {e.msg}") from None


def _emit(payload: dict, as_json: bool, lines):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _format_witness(witness: dict, indent: str = "  "):
    for key, value in witness.items():
        if isinstance(value, dict):
            yield f"{indent}{key}:"
            yield from _format_witness(value, indent + "  ")
        else:
            yield f"{indent}{key}: {json.dumps(value)}"


# ─── classify ──────────────────────────────────────────────────────────────

def run_classify(args) -> int:
    path = Path(args.path)
    if path.is_dir():
        return _classify_directory(path, args)

    start = time.perf_counter()
    desc = parse_descriptor(path.read_bytes(), max_group_order=args.max_group_order,
                            max_rank=args.max_rank)
    parsed = time.perf_counter()
    result = classify(desc, max_rank=args.max_rank)
    done = time.perf_counter()
    timings = {"parse": round((parsed - start) * 1000, 3),
               "classify": round((done - parsed) * 1000, 3)}

    payload = {**result.to_dict(), "timings_ms": timings}
    lines = [f"group: {describe(desc)}",
             f"verdict: {result.verdict.value}",
             f"criterion: {result.criterion}",
             "witness:", *_format_witness(result.witness)]
    if args.explain:
        payload["explanation"] = result.explanation()
        lines += ["", result.explanation()]
    _emit(payload, args.json, lines)

    if args.png:
        buf = report_card.render_report(result, describe(desc))
        Path(args.png).write_bytes(buf.getvalue())
        logger.info(f"report card written to {args.png}")
    return result.exit_code


def _classify_directory(directory: Path, args) -> int:
    classifier = BatchClassifier(args.max_group_order, args.max_rank)
    results = asyncio.run(classifier.classify_directory(directory))
    if args.json:
        out = []
        for r in results:
            if r["ok"]:
                out.append({"path": r["path"], **r["report"].to_dict(), "timings_ms": r["timings_ms"]})
            else:
                out.append({"path": r["path"], "error": r["error"]})
        print(json.dumps(out, indent=2))
    else:
        for r in results:
            name = Path(r["path"]).name
            if r["ok"]:
                print(f"{name}: {r['report'].verdict.value} ({r['report'].criterion})")
            else:
                print(f"{name}: error: {r['error']}")
    return exit_code(results)


# ─── Kernels ───────────────────────────────────────────────────────────────

def run_snf(args) -> int:
    reader = DocumentReader(args.max_group_order, args.max_rank)
    rows = reader.sequence(load_json_arg(args.matrix), "matrix")
    cols = len(rows[0]) if rows and isinstance(rows[0], list) else 0
    A = reader.matrix(rows, "matrix", len(rows), cols)
    dec = snf(A)
    payload = {"invariant_factors": list(dec.invariant_factors),
               "left": dec.left.to_lists(), "diagonal": dec.diag.to_lists(),
               "right": dec.right.to_lists()}
    factors = ", ".join(map(str, dec.invariant_factors)) or "none"
    _emit(payload, args.json, [f"invariant factors: {factors}"])
    return 0


def _lattice_arg(args):
    reader = DocumentReader(args.max_group_order, args.max_rank)
    doc = reader.obj(load_json_arg(args.lattice), "lattice")
    return reader.torus(doc, "lattice").character_lattice


def run_h1(args) -> int:
    M = _lattice_arg(args)
    G = M.group
    subgroup = args.subgroup or args.subgroup_flag
    if subgroup is None:
        H = G.whole()
    else:
        gens = load_json_arg(subgroup)
        H = G.subgroup_from_perms(gens)
    result = h1(H, M, max_rank=args.max_rank)
    _emit({"subgroup": H.to_dict(), "h1": str(result), "torsion": list(result.torsion)},
          args.json, [f"H^1 = {result}"])
    return 0


def run_invertible(args) -> int:
    M = _lattice_arg(args)
    test = is_invertible(M, max_rank=args.max_rank)
    lines = [f"invertible: {'true' if test.holds else 'false'}",
             f"cover rank: {test.cover.cover_lattice.rank}"]
    if test.section is not None:
        lines.append(f"section: {json.dumps(test.section.to_lists())}")
    if test.certificate is not None:
        lines.append(f"certificate: multiplier {list(test.certificate.multiplier)}, "
                     f"modulus {test.certificate.modulus}")
    _emit(test.to_dict(), args.json, lines)
    return 0


def run_forms_check(args) -> int:
    reader = DocumentReader(args.max_group_order, args.max_rank)
    doc = reader.obj(load_json_arg(args.spec), "spec")
    exponents = [reader.int_list(a, f"spec.exponents[{i}]")
                 for i, a in enumerate(reader.sequence(reader.field(doc, "exponents", "spec"), "spec.exponents"))]
    coefficients = reader.int_list(reader.field(doc, "coefficients", "spec"), "spec.coefficients")
    p = reader.integer(doc.get("p", DEFAULT_CHARACTERISTIC), "spec.p")
    num_vars = len(exponents[0]) if exponents else 0
    spec = DiagonalFormSpec(num_vars, tuple(map(tuple, exponents)), tuple(coefficients), p)

    criterion = anisotropy_criterion(spec)
    search = isotropy_search(spec, degree_bound=args.degree, trials=args.trials, seed=args.seed)
    payload = {"criterion": {"applicable": criterion.applicable,
                             "collision": list(criterion.collision) if criterion.collision else None}}
    lines = [f"parity criterion: {'anisotropic' if criterion.applicable else 'inapplicable'}"
             + (f" (exponents {criterion.collision[0]} and {criterion.collision[1]} agree mod 2)"
                if criterion.collision else "")]
    if isinstance(search, IsotropicWitness):
        payload["search"] = {"found": True, "vector": [str(x.as_expr()) for x in search.vector]}
        lines.append("isotropic vector: (" + ", ".join(str(x.as_expr()) for x in search.vector) + ")")
    else:
        payload["search"] = {"found": False, "trials": search.trials}
        lines.append(f"no isotropic vector in {search.trials} candidates")
    _emit(payload, args.json, lines)
    return 0
