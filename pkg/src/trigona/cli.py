"""Command-line front end.

Reads a JSON input document, dispatches to the engine, prints one JSON
report with stable key order.  Exit codes: 0 success / hypothesis holds /
flag found, 1 definitive negative, 2 unknown or truncated, 64 input
error.  The environment variable TRIGONA_SEED overrides any seed.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import harness, invariant, semigroup, unitarize
from .triangularize import check_kaplansky_hypothesis
from .triangularize import diagonal_of as _diagonal_of
from .triangularize import triangularize as run_triangularize
from .linalg import Flag, Matrix, verify_flag
from .scalar import field_from_descriptor

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 64


class InputError(ValueError):
    pass


def _load_document(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read document: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"bad JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    return doc


def _parse_exact(doc: dict):
    try:
        field = field_from_descriptor(doc["field"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad field descriptor: {exc}") from None
    raw = doc.get("generators")
    if not raw:
        raise InputError("document has no generators")
    gens = []
    for idx, rows in enumerate(raw):
        try:
            gens.append(Matrix.parse(field, rows))
        except Exception as exc:
            raise InputError(f"generator {idx}: {exc}") from None
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise InputError("generators have mismatched dimensions")
    return field, gens


def _parse_complex(doc: dict):
    raw = doc.get("generators")
    if not raw:
        raise InputError("document has no generators")
    gens = []
    for idx, rows in enumerate(raw):
        try:
            mat = []
            for row in rows:
                out = []
                for z in row:
                    if isinstance(z, (list, tuple)):
                        out.append(complex(z[0], z[1]))
                    else:
                        out.append(complex(z))
                mat.append(out)
            A = np.array(mat, dtype=complex)
        except Exception as exc:
            raise InputError(f"generator {idx}: {exc}") from None
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError(f"generator {idx} is not square")
        gens.append(A)
    n = gens[0].shape[0]
    if any(g.shape[0] != n for g in gens):
        raise InputError("generators have mismatched dimensions")
    return gens


def _options(doc: dict, args) -> dict:
    opts = dict(doc.get("options") or {})
    if args.cap is not None:
        opts["cap"] = args.cap
    if args.tol is not None:
        opts["tol"] = args.tol
    if args.seed is not None:
        opts["seed"] = args.seed
    env = os.environ.get("TRIGONA_SEED")
    if env is not None:
        opts["seed"] = int(env)
    opts.setdefault("cap", 10_000)
    opts.setdefault("tol", 1e-8)
    opts.setdefault("seed", 0)
    return opts


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2) + "\n")


def _subspace_rows(field, W) -> list:
    return [[field.format(x) for x in row] for row in W.rows]


# ---------------------------------------------------------------------------
# commands


def _cmd_closure(args) -> int:
    doc = _load_document(args.document)
    field, gens = _parse_exact(doc)
    opts = _options(doc, args)
    C = semigroup.closure(gens, cap=opts["cap"])
    report = {
        "command": "closure",
        "field": field.descriptor(),
        "n": gens[0].n,
        "cap": C.cap,
        "generator_count": C.generator_count,
        "element_count": len(C.elements),
        "truncated": C.truncated,
    }
    if args.emit_elements:
        report["elements"] = [M.to_strings() for M in C.elements]
    _emit(report)
    return EXIT_UNKNOWN if C.truncated else EXIT_OK


def _cmd_spectrum(args) -> int:
    doc = _load_document(args.document)
    field, gens = _parse_exact(doc)
    from .spectrum import singleton_spectrum
    reports = [singleton_spectrum(g).to_jsonable(field) for g in gens]
    _emit({"command": "spectrum", "field": field.descriptor(),
           "n": gens[0].n, "reports": reports})
    return EXIT_OK if all(r["singleton"] for r in reports) else EXIT_NEGATIVE


def _cmd_check(args) -> int:
    doc = _load_document(args.document)
    field, gens = _parse_exact(doc)
    opts = _options(doc, args)
    if args.verify_flag:
        flag_doc = _load_document(args.verify_flag)
        rows = flag_doc.get("T", flag_doc if isinstance(flag_doc, list) else None)
        if rows is None:
            raise InputError("flag file needs a 'T' entry")
        T = Matrix.parse(field, rows)
        try:
            flag = Flag(T)
        except Exception:
            _emit({"command": "check", "mode": "verify_flag", "valid": False,
                   "reason": "T is singular"})
            return EXIT_NEGATIVE
        ok = verify_flag(gens, flag)
        _emit({"command": "check", "mode": "verify_flag", "valid": ok})
        return EXIT_OK if ok else EXIT_NEGATIVE
    if args.reducibility:
        verdict = invariant.find_invariant_subspace(gens, seed=opts["seed"])
        report = {"command": "check", "mode": "reducibility",
                  "field": field.descriptor(), "n": gens[0].n,
                  "status": verdict.status,
                  "stage": verdict.stage,
                  "certificate": verdict.certificate,
                  "subspace": (_subspace_rows(field, verdict.subspace)
                               if verdict.reducible else None)}
        _emit(report)
        if verdict.status == invariant.REDUCIBLE:
            return EXIT_OK
        if verdict.status == invariant.IRREDUCIBLE:
            return EXIT_NEGATIVE
        return EXIT_UNKNOWN
    rep = check_kaplansky_hypothesis(gens, cap=opts["cap"])
    report = {"command": "check", "mode": "hypothesis",
              "field": field.descriptor(), "n": gens[0].n,
              "checked_elements": rep.checked_elements,
              "all_singleton": rep.all_singleton,
              "closure_truncated": rep.closure_truncated,
              "witnesses": [{"matrix": M.to_strings(),
                             "spectrum": sr.to_jsonable(field)}
                            for M, sr in rep.witnesses]}
    _emit(report)
    if not rep.all_singleton:
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN if rep.closure_truncated else EXIT_OK


def _cmd_triangularize(args) -> int:
    doc = _load_document(args.document)
    field, gens = _parse_exact(doc)
    opts = _options(doc, args)
    res = run_triangularize(gens, seed=opts["seed"])
    report = {"command": "triangularize", "field": field.descriptor(),
              "n": gens[0].n, "outcome": res.outcome}
    if res.ok:
        report["T"] = res.flag.T.to_strings()
        report["conjugated"] = [res.flag.conjugated(g).to_strings()
                                for g in gens]
        if args.diagonals:
            report["diagonals"] = [[field.format(x) for x in d]
                                   for d in _diagonal_of(gens, res.flag)]
    else:
        report["level"] = res.level
        report["certificate"] = res.certificate
    report["diagnostics"] = [{"path": list(info.path), "dim": info.dim,
                              "stage": info.stage,
                              "subspace_dim": info.subspace_dim}
                             for info in res.diagnostics]
    _emit(report)
    if res.ok:
        return EXIT_OK
    return EXIT_NEGATIVE if res.outcome == "irreducible" else EXIT_UNKNOWN


def _cmd_unitarize(args) -> int:
    doc = _load_document(args.document)
    if (doc.get("field") or {}).get("kind") != "C":
        raise InputError('unitarize needs field {"kind": "C"}')
    gens = _parse_complex(doc)
    opts = _options(doc, args)
    cap = min(opts["cap"], 10_000)
    try:
        res = unitarize.block_unitarize(gens, cap=cap, tol=opts["tol"],
                                        seed=opts["seed"])
    except unitarize.NotOnCircle as exc:
        _emit({"command": "unitarize", "outcome": "not_on_circle",
               "generator": exc.index,
               "max_deviation": exc.report.max_deviation})
        return EXIT_NEGATIVE
    except unitarize.SingularInput as exc:
        _emit({"command": "unitarize", "outcome": "singular_generator",
               "detail": str(exc)})
        return EXIT_NEGATIVE
    except unitarize.ClosureNotFinite as exc:
        _emit({"command": "unitarize", "outcome": "closure_not_finite",
               "detail": str(exc)})
        return EXIT_UNKNOWN
    sim = [[[float(z.real), float(z.imag)] for z in row]
           for row in res.similarity]
    _emit({"command": "unitarize", "outcome": "ok",
           "block_dims": list(res.block_dims), "kinds": list(res.kinds),
           "residuals": list(res.residuals), "similarity": sim})
    return EXIT_OK


def _cmd_selftest(args) -> int:
    suites = [args.suite] if args.suite else None
    table = harness.run_selftest(limit=args.limit, suites=suites)
    _emit(table)
    return EXIT_OK if table["all_pass"] else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigona",
        description="exact triangularization engine for matrix semigroups")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_doc=True):
        if needs_doc:
            p.add_argument("document", help="input JSON document ('-' = stdin)")
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("closure", help="enumerate the multiplicative closure")
    common(p)
    p.add_argument("--emit-elements", action="store_true")
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("spectrum", help="singleton-spectrum report per generator")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("check", help="hypothesis / reducibility / flag checks")
    common(p)
    p.add_argument("--reducibility", action="store_true")
    p.add_argument("--verify-flag", metavar="FILE", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("triangularize", help="build a simultaneous flag")
    common(p)
    p.add_argument("--diagonals", action="store_true")
    p.set_defaults(func=_cmd_triangularize)

    p = sub.add_parser("unitarize", help="numeric block unitarization")
    common(p)
    p.set_defaults(func=_cmd_unitarize)

    p = sub.add_parser("selftest", help="run the acceptance matrix")
    p.add_argument("--limit", type=int, default=None,
                   help="cap instances per suite")
    p.add_argument("--suite", choices=sorted(harness.SUITES), default=None)
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


def run_to_string(argv: list, document: dict) -> str:
    """Run the CLI on an in-memory document, capturing stdout (for tests)."""
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(document, fh)
        path = fh.name
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv + [path])
    finally:
        sys.stdout = old
        os.unlink(path)
    return f"exit={code}\n" + buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
