"""Command-line interface.

Every command builds a report document; ``--json`` prints it as JSON and
the default prints an aligned text summary.  Exit codes: 0 success,
1 verification failure, 2 input error, 3 budget exhaustion.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time

from . import __version__
from .complexes import (ProjComplex, decompose_complex, direct_sum, end_dim, find_complex_isomorphism, hom_dims,
                        homology_table, regular, shift, stalk, twist_complex)
from .io import ParseError, complex_from_json, complex_to_dict, complex_to_json, load_algebra_file
from .modules import (ResolutionTooLong, global_dimension, injective, minimal_projective_resolution, projective,
                      simple)
from .silting import (LEFT, RIGHT, BudgetExhausted, InvalidCertificate, SiltingObject, check_spherical, explore,
                      induce_trivial_extension, is_presilting, is_silting, mutate, spherical_twist)

BUDGET_ENV = "SILTINGKIT_BUDGET"
SCHEMA = "siltingkit-report"
SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class Outcome:
    """What a command produced: JSON results, text lines, exit status and
    optional artifact written by ``--out``."""

    def __init__(self, results, lines, status=EXIT_OK, artifact=None, provenance=None):
        self.results = results
        self.lines = lines
        self.status = status
        self.artifact = artifact
        self.provenance = provenance or []


# ---------------------------------------------------------------------------
# inputs

def _load(args):
    af = load_algebra_file(args.file)
    A = af.build(args.field)
    return af, A


def parse_module(spec: str, af, A):
    """``S<i>``, ``P<i>``, ``I<i>`` or a module name from the file."""
    m = re.fullmatch(r"([SPI])(\d+)", spec)
    if m and spec not in af.modules:
        i = int(m.group(2))
        if i not in A.vertices:
            raise ValueError(f"no vertex {i}")
        return {"S": simple, "P": projective, "I": injective}[m.group(1)](A, i)
    return af.module(spec, A)


def parse_object(spec: str, af, A) -> ProjComplex:
    """Sum of terms separated by ``+``.  A term is ``A`` (regular), ``P<i>``
    (stalk), a module name (its minimal projective resolution) or
    ``@path.json`` (serialized complex), optionally followed by ``[s]``."""
    parts = []
    for raw in spec.split("+"):
        term = raw.strip()
        s = 0
        m = re.fullmatch(r"(.*)\[(-?\d+)\]", term)
        if m:
            term, s = m.group(1).strip(), int(m.group(2))
        if not term:
            raise ValueError(f"empty term in object spec {spec!r}")
        if term == "A":
            X = regular(A)
        elif term.startswith("@"):
            with open(term[1:]) as fh:
                X = complex_from_json(fh.read(), A)
        elif re.fullmatch(r"P\d+", term) and term not in af.modules:
            i = int(term[1:])
            if i not in A.vertices:
                raise ValueError(f"no vertex {i}")
            X = stalk(A, i)
        else:
            X = minimal_projective_resolution(parse_module(term, af, A)).to_complex()
        parts.append(shift(X, s))
    return parts[0] if len(parts) == 1 else direct_sum(*parts)


def _int_list(text):
    if text is None or not text.strip():
        return []
    return [int(t) for t in text.split(",") if t.strip()]


def _homology(X) -> dict:
    return {str(j): list(h.dims) for j, h in homology_table(X).items()}


def _complex_summary(X) -> dict:
    return {"describe": X.describe(), "degree_range": [X.lo, X.hi], "homology": _homology(X),
            "complex": complex_to_dict(X)}


def _table(rows):
    """Left-aligned text table."""
    if not rows:
        return []
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


# ---------------------------------------------------------------------------
# commands

def cmd_info(args) -> Outcome:
    af, A = _load(args)
    verts = list(A.vertices)
    pairs = {f"{i},{j}": A.dim_between(j, i) for i in verts for j in verts}
    max_len = args.budget if args.budget is not None else 50
    try:
        gldim = global_dimension(A, max_length=max_len)
    except ResolutionTooLong:
        gldim = None
    results = {"field": repr(A.field), "vertices": len(verts), "arrows": [list(a) for a in af.arrows],
               "dimension": A.dim, "basis": list(A.names), "hom_projectives": pairs,
               "global_dimension": gldim, "global_dimension_cap": max_len}
    lines = [f"field {A.field!r}", f"vertices {len(verts)}", f"dimension {A.dim}",
             f"global dimension {gldim if gldim is not None else f'> {max_len}'}",
             "basis " + " ".join(A.names), "dim e_jAe_i (row i, column j):"]
    lines += _table([["i\\j"] + verts] + [[i] + [A.dim_between(j, i) for j in verts] for i in verts])
    status = EXIT_OK if gldim is not None else EXIT_BUDGET
    return Outcome(results, lines, status)


def cmd_resolve(args) -> Outcome:
    af, A = _load(args)
    M = parse_module(args.module, af, A)
    max_len = args.budget if args.budget is not None else 50
    try:
        R = minimal_projective_resolution(M, max_length=max_len)
    except ResolutionTooLong as e:
        raise BudgetExhausted(str(e)) from e
    X = R.to_complex()
    results = {"module": args.module, "dimension_vector": list(M.dims), "length": R.length,
               "resolution": X.describe(), "complex": complex_to_dict(X)}
    lines = [f"module {args.module}  dimension vector {list(M.dims)}", f"projective dimension {R.length}",
             f"resolution {X.describe()}"]
    return Outcome(results, lines, artifact=complex_to_json(X))


def cmd_hom(args) -> Outcome:
    af, A = _load(args)
    X, Y = parse_object(args.source, af, A), parse_object(args.target, af, A)
    dims = hom_dims(X, Y)
    results = {"source": args.source, "target": args.target, "hom_dims": {str(n): v for n, v in dims.items()}}
    lines = [f"dim Hom(X, Y[n]) for X = {args.source}, Y = {args.target}"]
    lines += _table([["n", "dim"]] + [[n, v] for n, v in dims.items()]) if dims else ["all zero"]
    return Outcome(results, lines)


def _invariance(X, autos, seed):
    verdicts, prov = {}, []
    for sigma in autos:
        r = find_complex_isomorphism(X, twist_complex(X, sigma), seed=seed)
        verdicts[sigma.name] = r.isomorphic
        prov.append(dict(r.provenance(), context=f"{sigma.name}-invariance"))
    return verdicts, prov


def cmd_twist(args) -> Outcome:
    af, A = _load(args)
    E = parse_module(args.module, af, A)
    autos = af.all_automorphisms(A)
    cert = check_spherical(E, args.d, autos, seed=args.seed)
    results = {"certificate": cert.to_dict()}
    lines = [f"certificate for {args.module}, d = {args.d}: {'valid' if cert.valid else 'invalid'}"]
    lines += [f"  {r}" for r in cert.reasons]
    if cert.serre.get("isomorphic_to_twist"):
        lines.append("  Serre functor image matches twist by " + ", ".join(cert.serre["isomorphic_to_twist"]))
    prov = [dict(cert.serre["iso_provenance"], context="serre")] if "iso_provenance" in cert.serre else []
    if not cert.valid:
        return Outcome(results, lines, EXIT_FAIL, provenance=prov)
    X = parse_object(args.target, af, A)
    Y = spherical_twist(cert, X, args.power)
    summands = decompose_complex(Y, seed=args.seed)
    verdicts, p2 = _invariance(Y, autos, args.seed)
    results["result"] = _complex_summary(Y)
    results["summands"] = [{"describe": Z.describe(), "homology": _homology(Z)} for Z in summands]
    results["invariance"] = verdicts
    lines.append(f"twist^{args.power} of {args.target}: {Y.describe()}")
    for Z in summands:
        lines.append(f"  summand {Z.describe()}  homology {_homology(Z)}")
    for name, v in verdicts.items():
        lines.append(f"  {name}-invariant: {'yes' if v else 'no'}")
    return Outcome(results, lines, artifact=complex_to_json(Y), provenance=prov + p2)


def _silting_start(X, seed):
    obj = SiltingObject.from_complex(X, seed=seed)
    if not obj.presilting_verified:
        raise ValueError("object is not presilting")
    return obj


def cmd_mutate(args) -> Outcome:
    af, A = _load(args)
    M = _silting_start(parse_object(args.object, af, A), args.seed)
    keep = _int_list(args.keep)
    if any(k < 0 or k >= len(M) for k in keep):
        raise ValueError(f"keep indices must lie in 0..{len(M) - 1}")
    N = mutate(M, keep, args.direction, seed=args.seed)
    verdicts, prov = _invariance(N.complex, af.all_automorphisms(A), args.seed)
    results = {"object": M.describe(), "keep": keep, "direction": args.direction, "result": N.describe(),
               "presilting": is_presilting(N.complex), "invariance": verdicts,
               "complex": complex_to_dict(N.complex)}
    lines = ["summands:"] + [f"  {i}: {s}" for i, s in enumerate(M.describe())]
    lines += [f"{args.direction} mutation keeping {keep}:"] + [f"  {s}" for s in N.describe()]
    lines += [f"  {name}-invariant: {'yes' if v else 'no'}" for name, v in verdicts.items()]
    return Outcome(results, lines, artifact=complex_to_json(N.complex), provenance=prov)


def cmd_explore(args) -> Outcome:
    af, A = _load(args)
    M = _silting_start(parse_object(args.object, af, A), args.seed)
    autos = af.all_automorphisms(A)
    g = explore(M, args.depth, autos, budget=args.budget, extended=args.extended, seed=args.seed)
    results = dict(g.to_dict(), depth=args.depth, extended=args.extended)
    lines = [f"{len(g.nodes)} nodes, {len(g.edges)} edges, depth {args.depth}"
             + ("" if g.complete else " (budget exhausted, partial graph)")]
    for i, node in enumerate(g.nodes):
        inv = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(g.labels[i].items()))
        lines.append(f"  [{i}] depth {g.depth[i]}  {' | '.join(node.describe())}  {inv}".rstrip())
    artifact = g.to_dot() if (args.out or "").endswith(".dot") else g.to_json()
    prov = [{"context": "mutation graph node identification and invariance", "method": "exact",
             "exact": True, "seed": args.seed, "failure_bound": 0.0}]
    return Outcome(results, lines, EXIT_OK if g.complete else EXIT_BUDGET, artifact, prov)


def cmd_check(args) -> Outcome:
    af, A = _load(args)
    if (args.module is None) == (args.object is None):
        raise ValueError("give exactly one of --module or --object")
    if args.module is not None:
        if args.d is None:
            raise ValueError("--module needs --d")
        E = parse_module(args.module, af, A)
        cert = check_spherical(E, args.d, af.all_automorphisms(A), seed=args.seed)
        lines = [f"{args.module} is {'' if cert.valid else 'not '}{args.d}-spherical"]
        lines += [f"  {r}" for r in cert.reasons]
        lines.append("  Ext table " + " ".join(f"{j}:{v}" for j, v in sorted(cert.ext_table.items()) if v))
        if cert.serre.get("isomorphic_to_twist"):
            lines.append("  Serre functor image matches twist by " + ", ".join(cert.serre["isomorphic_to_twist"]))
        prov = [dict(cert.serre["iso_provenance"], context="serre")] if "iso_provenance" in cert.serre else []
        return Outcome({"certificate": cert.to_dict()}, lines, EXIT_OK if cert.valid else EXIT_FAIL,
                       cert.to_json(), prov)
    X = parse_object(args.object, af, A)
    budget = args.budget if args.budget is not None else 64
    verdict = is_silting(X, budget=budget, seed=args.seed)
    results = {"object": args.object, "status": verdict.status, "checks": verdict.checks}
    lines = [f"{args.object}: silting status {verdict.status}"]
    lines += [f"  {k}: {v}" for k, v in sorted(verdict.checks.items())]
    if verdict:
        status = EXIT_OK
    elif str(verdict.checks.get("generation", "")).startswith("budget"):
        status = EXIT_BUDGET
    else:
        status = EXIT_FAIL
    return Outcome(results, lines, status)


def cmd_induce(args) -> Outcome:
    af, A = _load(args)
    tf = load_algebra_file(args.trivial_extension)
    T = tf.build(args.field)
    X = parse_object(args.object, af, A)
    Y = induce_trivial_extension(X, T)
    verdicts, prov = _invariance(Y, tf.all_automorphisms(T), args.seed)
    results = dict(_complex_summary(Y), presilting=is_presilting(Y), end_dimension=end_dim(Y), invariance=verdicts)
    lines = [f"induced complex {Y.describe()}", f"  presilting: {'yes' if results['presilting'] else 'no'}",
             f"  dim End: {results['end_dimension']}"]
    lines += [f"  {name}-invariant: {'yes' if v else 'no'}" for name, v in verdicts.items()]
    return Outcome(results, lines, artifact=complex_to_json(Y), provenance=prov)


def cmd_paper_verify(args) -> Outcome:
    from . import verify
    sections = args.sections.split(",") if args.sections else list(verify.SECTIONS)
    checks = verify.run(args.n, sections, budget=args.budget, seed=args.seed)
    results = {"n": args.n, "sections": sections, "checks": [c.to_dict() for c in checks],
               "passed": all(c.passed for c in checks)}
    rows = [["section", "check", "result", "note"]]
    for c in checks:
        rows.append([c.section, c.name, "pass" if c.passed else f"FAIL expected {c.expected} got {c.computed}",
                     c.note])
    lines = _table(rows)
    prov = [{"context": "reproduction checks", "method": "exact", "exact": True, "seed": args.seed,
             "failure_bound": 0.0}]
    return Outcome(results, lines, EXIT_OK if results["passed"] else EXIT_FAIL, provenance=prov)


# ---------------------------------------------------------------------------
# parser and report

def _default_budget():
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {BUDGET_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="override the field: Q or Fp:<prime>")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    common.add_argument("--depth", type=int, default=2, help="exploration depth")
    common.add_argument("--budget", type=int, default=None,
                        help=f"effort budget (default from ${BUDGET_ENV}, else unlimited)")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", help="write the command's artifact (complex, graph or certificate) here")

    p = argparse.ArgumentParser(prog="siltingkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    file_help = "algebra file, or builtin:A<n>, builtin:T<n>, builtin:kronecker"

    s = sub.add_parser("info", parents=[common], help="dimensions, basis and global dimension")
    s.add_argument("file", help=file_help)
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("resolve", parents=[common], help="minimal projective resolution of a module")
    s.add_argument("file", help=file_help)
    s.add_argument("module", help="module name, or S<i>, P<i>, I<i>")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("hom", parents=[common], help="dim Hom(X, Y[n]) in the homotopy category")
    s.add_argument("file", help=file_help)
    s.add_argument("source", help="object spec, e.g. A, P1[1], E, @x.json, P1+P2")
    s.add_argument("target", help="object spec")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("twist", parents=[common], help="spherical twist by a module")
    s.add_argument("file", help=file_help)
    s.add_argument("module", help="module name")
    s.add_argument("--d", type=int, required=True, help="sphericity degree")
    s.add_argument("--power", type=int, default=1, help="power of the twist; negative for the inverse")
    s.add_argument("--target", default="A", help="object spec to twist (default A)")
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("mutate", parents=[common], help="silting mutation")
    s.add_argument("file", help=file_help)
    s.add_argument("--object", default="A", help="object spec (default A)")
    s.add_argument("--keep", default="", help="comma-separated summand indices to keep")
    s.add_argument("--direction", choices=[LEFT, RIGHT], default=LEFT)
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("explore", parents=[common], help="mutation graph up to --depth")
    s.add_argument("file", help=file_help)
    s.add_argument("--object", default="A", help="start object spec (default A)")
    s.add_argument("--extended", action="store_true", help="all proper mutations, not only irreducible")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("check", parents=[common], help="sphericity of a module or silting of an object")
    s.add_argument("file", help=file_help)
    s.add_argument("--module", help="module name to test for sphericity")
    s.add_argument("--d", type=int, help="sphericity degree")
    s.add_argument("--object", help="object spec to test for silting")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("induce", parents=[common], help="induce a complex to the trivial extension")
    s.add_argument("file", help=file_help)
    s.add_argument("--trivial-extension", required=True, help="trivial extension algebra file")
    s.add_argument("--object", default="A", help="object spec (default A)")
    s.set_defaults(func=cmd_induce)

    s = sub.add_parser("paper-verify", parents=[common], help="run the reproduction checks for A_n")
    s.add_argument("--n", type=int, default=4, help="n in 2..6")
    s.add_argument("--sections", help="comma-separated sections (default all)")
    s.set_defaults(func=cmd_paper_verify)
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json", "out")}
    path = getattr(args, "file", None)
    if path and not path.startswith("builtin:") and os.path.exists(path):
        with open(path, "rb") as fh:
            cfg["file_sha256"] = hashlib.sha256(fh.read()).hexdigest()
    return cfg


def make_report(argv, args, outcome: Outcome, seconds: float) -> dict:
    cfg = _config(args)
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": list(argv),
        "config": cfg,
        "config_hash": hashlib.sha256(blob).hexdigest(),
        "timing": {"seconds": round(seconds, 6)},
        "exit_status": outcome.status,
        "results": outcome.results,
        "isomorphism_provenance": outcome.provenance,
    }


def _error(args, argv, message, status, as_json):
    if as_json:
        doc = {"schema": SCHEMA, "schema_version": SCHEMA_VERSION, "command": list(argv),
               "exit_status": status, "error": message}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"error: {message}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.budget is None:
        try:
            args.budget = _default_budget()
        except SystemExit as e:
            print(e, file=sys.stderr)
            return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        outcome = args.func(args)
    except ParseError as e:
        return _error(args, argv, str(e), EXIT_INPUT, args.json)
    except InvalidCertificate as e:
        return _error(args, argv, f"invalid certificate: {e}", EXIT_FAIL, args.json)
    except BudgetExhausted as e:
        return _error(args, argv, f"budget exhausted: {e}", EXIT_BUDGET, args.json)
    except (ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        return _error(args, argv, msg, EXIT_INPUT, args.json)
    report = make_report(argv, args, outcome, time.perf_counter() - t0)
    if args.out and outcome.artifact is not None:
        with open(args.out, "w") as fh:
            fh.write(outcome.artifact if outcome.artifact.endswith("\n") else outcome.artifact + "\n")
    elif args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(outcome.lines))
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
