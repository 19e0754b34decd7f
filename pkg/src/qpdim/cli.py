"""Command line: load descriptors, run an operation, print a report.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import corpus
from .chaincomplex import ComplexError, FreeComplex
from .exactlin import Field, FieldError
from .fkh import is_fkh, link
from .fpmodule import ModulePresentation, derived_table, minimal_resolution, vectorize
from .koszul import depth, koszul_homology
from .polyring import ParseError, PolyRing
from .qpdcore import qpd_eval, qpl_upper, verify_qpr
from .ring import ARTINIAN, GRADED, QuotientRing, RingError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
RING_KEYS = {"field", "vars", "ideal", "regime"}


class InputError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("reason", "verification failed"))
        self.report = report


# descriptors


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _resolve(ref, base: str):
    """A nested descriptor given inline or as a path relative to the referring file."""
    if isinstance(ref, dict):
        return ref, base
    if not isinstance(ref, str):
        raise InputError(f"{base}: 'ring' must be a path or an object")
    path = ref if os.path.isabs(ref) else os.path.join(os.path.dirname(base), ref)
    return _read_json(path), path


def _is_regular(ring: QuotientRing) -> bool:
    if not ring.graded or not ring.ideal:
        return False
    bound = 2 * max(g.degree() for g in ring.ideal) + 6
    rep = koszul_homology(ring.ambient(), ring.ideal, bound=bound)
    return not any(d for i, d in rep.dims.items() if i > 0)


def ring_from_dict(d: dict, where: str, char: int | None = None) -> QuotientRing:
    if not isinstance(d, dict) or set(d) != RING_KEYS:
        raise InputError(f"{where}: ring descriptor needs exactly the keys {sorted(RING_KEYS)}")
    c = d["field"].get("char") if isinstance(d["field"], dict) else None
    c = c if char is None else char
    if not isinstance(c, int):
        raise InputError(f"{where}: field.char must be an integer")
    if d["regime"] not in (ARTINIAN, GRADED):
        raise InputError(f"{where}: regime must be {ARTINIAN!r} or {GRADED!r}")
    try:
        poly = PolyRing(Field(c), d["vars"])
    except (FieldError, ValueError) as e:
        raise InputError(f"{where}: {e}") from None
    gens = []
    for i, s in enumerate(d["ideal"]):
        try:
            gens.append(poly.parse(s))
        except ParseError as e:
            raise InputError(f"{where}: ideal[{i}]: {e}") from None
    try:
        ring = QuotientRing(poly, gens, d["regime"])
    except (RingError, ArithmeticError) as e:
        raise InputError(f"{where}: {type(e).__name__}: {e}") from None
    ring.regular_sequence = _is_regular(ring)
    return ring


def load_ring(path: str, char: int | None = None) -> QuotientRing:
    return ring_from_dict(_read_json(path), path, char)


def _parse_in(ring: QuotientRing, s, where: str):
    try:
        return ring.element(s)
    except ParseError as e:
        raise InputError(f"{where}: {e}") from None


def load_module(path: str, char: int | None = None, bound: int | None = None):
    d = _read_json(path)
    if not isinstance(d, dict) or "ring" not in d or "generators" not in d:
        raise InputError(f"{path}: module descriptor needs 'ring', 'generators' and 'relations'")
    rd, rpath = _resolve(d["ring"], path)
    ring = ring_from_dict(rd, rpath, char)
    degs = [g.get("degree", 0) if isinstance(g, dict) else g for g in d["generators"]]
    rows = [
        [_parse_in(ring, s, f"{path}: relations[{i}][{j}]") for j, s in enumerate(row)]
        for i, row in enumerate(d.get("relations", []))
    ]
    try:
        p = ModulePresentation(ring, degs, rows)
    except (RingError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None
    return vectorize(p, bound)


def load_complex(path: str, char: int | None = None) -> FreeComplex:
    d = _read_json(path)
    keys = {"ring", "lo", "ranks", "differentials"}
    if not isinstance(d, dict) or not keys <= set(d):
        raise InputError(f"{path}: complex descriptor needs {sorted(keys | {'twists'})}")
    rd, rpath = _resolve(d["ring"], path)
    ring = ring_from_dict(rd, rpath, char)
    diffs = [
        [[_parse_in(ring, s, f"{path}: differentials[{k}][{i}][{j}]") for j, s in enumerate(row)] for i, row in enumerate(m)]
        for k, m in enumerate(d["differentials"])
    ]
    try:
        return FreeComplex(ring, d["lo"], d["ranks"], d.get("twists"), diffs)
    except ComplexError as e:
        raise VerificationFailed({"reason": f"{path}: {type(e).__name__}: {e}"}) from None
    except (RingError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_any(path: str, char, bound):
    d = _read_json(path)
    if isinstance(d, dict) and "vars" in d:
        return ring_from_dict(d, path, char)
    return load_module(path, char, bound)


def _polys(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


# reports


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    for k in sorted(report):
        v = report[k]
        lines.append(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines)


def _hilbert_list(h: dict) -> list:
    return [[d, c] for d, c in sorted(h.items())]


# commands


def cmd_ring_info(a) -> dict:
    ring = load_ring(a.ring, a.field)
    out = {
        "char": ring.field.char,
        "vars": list(ring.names),
        "ideal": [str(g) for g in ring.ideal],
        "regime": ring.regime,
        "groebner": [str(g) for g in ring.gb.polys] if ring.gb else [],
        "finite": ring.finite,
        "depth": depth(ring, a.max_degree).value,
    }
    if ring.finite:
        out["dim"] = len(ring.basis_upto(None))
        out["socle_dim"] = len(ring.socle())
        out["gorenstein"] = ring.is_gorenstein()
    else:
        out["hilbert"] = ring.hilbert(a.max_degree if a.max_degree is not None else 10)
        out["regular_sequence"] = ring.regular_sequence
    return out


def cmd_resolve(a) -> dict:
    m = load_module(a.module, a.field, a.max_degree)
    res = minimal_resolution(m, a.hom_steps)
    out = {"betti": res.betti, "terminated": res.terminated, "pd": res.pd, "steps": a.hom_steps}
    if m.graded:
        out["graded_betti"] = [_hilbert_list(b) for b in res.graded_betti()]
        out["max_degree"] = res.trunc
    return out


def _derived(a, kind) -> dict:
    m = load_module(a.m, a.field, a.max_degree)
    n = load_module(a.n, a.field, a.max_degree)
    t = derived_table(m, n, kind, a.max_index, a.max_degree if m.graded else None)
    out = {"kind": kind, "dims": t.dims}
    if m.graded:
        out["max_degree"] = t.trunc
        out["hilbert"] = [_hilbert_list(h) for h in t.hilbert]
    return out


def cmd_tor(a):
    return _derived(a, "Tor")


def cmd_ext(a):
    return _derived(a, "Ext")


def cmd_depth(a) -> dict:
    x = _load_any(a.path, a.field, a.max_degree)
    d = depth(x, a.max_degree)
    return {"depth": d.value, "koszul_dims": [d.dims[i] for i in sorted(d.dims)], "stable": d.stable}


def cmd_koszul(a) -> dict:
    x = _load_any(a.path, a.field, a.max_degree)
    if isinstance(x, QuotientRing):
        ring, coeff = x, None
    else:
        ring, coeff = x.ring, x
    seq = _polys(a.seq) or [str(v) for v in ring.names]
    seq = [_parse_in(ring, s, f"--seq {s!r}") for s in seq]
    rep = koszul_homology(ring, seq, coeff, a.max_degree if ring.graded else None)
    out = {"sequence": [str(f) for f in seq], "dims": [rep.dims[i] for i in sorted(rep.dims)], "hsup": rep.hsup}
    if ring.graded:
        out["hilbert"] = [_hilbert_list(rep.hilbert[i]) for i in sorted(rep.hilbert)]
    return out


def cmd_qpd(a) -> dict:
    m = load_module(a.module, a.field, a.max_degree)
    if a.complex:
        c = load_complex(a.complex, a.field)
        cert = verify_qpr(c, m, a.trials, a.seed)
        if not cert:
            raise VerificationFailed({"verdict": "failed", "reason": cert.reason, "index": cert.index, "detail": cert.detail})
        return {
            "verdict": "certificate",
            "multiplicities": cert.multiplicity_list(),
            "qpd_from_complex": cert.qpd_from_complex,
            "qpl_from_complex": cert.qpl_from_complex,
        }
    v = qpd_eval(m, steps=a.hom_steps, trials=a.trials, seed=a.seed)
    return {
        "verdict": v.verdict,
        "qpd": v.value,
        "depthR": v.depth_ring,
        "depthM": v.depth_module,
        "certificate": _certificate(v.certificate, a.module),
        "obstruction": str(v.obstruction[0]) if v.obstruction else None,
        "route": v.route,
    }


def _certificate(cert, module_path: str):
    """The certificate descriptor, pointing at the same ring as the module file."""
    if not cert:
        return None
    d = cert.descriptor()
    d["ring"] = _read_json(module_path)["ring"]
    return d


def cmd_qpl(a) -> dict:
    m = load_module(a.module, a.field, a.max_degree)
    q = qpl_upper(m, steps=a.hom_steps, trials=a.trials, seed=a.seed)
    return {"qpl_upper": q.value, "upper_bound_only": True, "candidates": [list(c) for c in q.candidates]}


def cmd_fkh(a) -> dict:
    ring = load_ring(a.ring, a.field)
    gens = [_parse_in(ring, s, f"--ideal {s!r}") for s in _polys(a.ideal)]
    if not gens:
        raise InputError("--ideal needs at least one generator")
    return is_fkh(ring, gens, a.max_degree if ring.graded else None).to_json()


def cmd_link(a) -> dict:
    ring = load_ring(a.ring, a.field)
    seq = [_parse_in(ring, s, f"--seq {s!r}") for s in _polys(a.seq)]
    gens = [_parse_in(ring, s, f"--ideal {s!r}") for s in _polys(a.ideal)]
    if not gens:
        raise InputError("--ideal needs at least one generator")
    r = link(ring, seq, gens, a.max_degree if ring.graded else None)
    return {"sequence": r.sequence, "ideal": r.ideal, "linked": r.linked, "double_link": r.double_link, "window": r.window}


def _options(a) -> corpus.Options:
    return corpus.Options(
        field=a.field if a.field is not None else corpus.DEFAULT_FIELD,
        seed=a.seed,
        trials=a.trials,
        max_degree=a.max_degree if a.max_degree is not None else 14,
        window=a.window,
    )


def _run_items(ids: list[str], o: corpus.Options, jobs: int) -> list[dict]:
    ids = sorted(ids)
    if jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(corpus.run_item, ids, [o] * len(ids)))
    return [corpus.run_item(i, o) for i in ids]


def cmd_verify_corpus(a) -> dict:
    ids = [i for group in (a.only or []) for i in _polys(group)] or [it.id for it in corpus.ITEMS]
    unknown = [i for i in ids if i not in corpus.BY_ID]
    if unknown:
        raise InputError(f"unknown corpus id(s): {', '.join(unknown)}")
    items = _run_items(ids, _options(a), a.jobs)
    report = {"items": items, "passed": sum(r["passed"] for r in items), "failed": sum(not r["passed"] for r in items)}
    if report["failed"]:
        raise VerificationFailed(report)
    return report


def cmd_check(a) -> dict:
    a.only = [a.id]
    return cmd_verify_corpus(a)


def render_corpus(report: dict, fmt: str) -> str:
    if fmt == "json":
        return render(report, fmt)
    lines = [f"{'PASS' if r['passed'] else 'FAIL'} {r['id']}: {r['claim']}" for r in report["items"]]
    lines.append(f"{report['passed']} passed, {report['failed']} failed")
    return "\n".join(lines)


# argument parsing


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_nonneg, default=None, help="override the characteristic (a prime, or 0)")
    common.add_argument("--max-degree", type=_nonneg, default=None, help="degree bound for graded rings")
    common.add_argument("--hom-steps", type=_nonneg, default=6, help="resolution length")
    common.add_argument("--window", type=_positive, default=12, help="window for tail checks")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive, default=64, help="random trials in isomorphism tests")
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--only", action="append", help="corpus ids (repeatable or comma separated)")

    p = argparse.ArgumentParser(prog="qpdim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, aliases=()):
        s = sub.add_parser(name, parents=[common], help=help, aliases=list(aliases))
        s.set_defaults(fn=fn)
        return s

    add("ring-info", cmd_ring_info, "basic invariants of a ring").add_argument("ring")
    add("resolve", cmd_resolve, "minimal free resolution").add_argument("module")
    for name, fn in (("tor", cmd_tor), ("ext", cmd_ext)):
        s = add(name, fn, f"dimensions of {name.capitalize()}")
        s.add_argument("m")
        s.add_argument("n")
        s.add_argument("--max-index", type=_nonneg, default=8)
    add("depth", cmd_depth, "depth of a ring or module").add_argument("path")
    s = add("koszul", cmd_koszul, "Koszul homology")
    s.add_argument("path")
    s.add_argument("--seq", default="", help="comma separated elements (default: the variables)")
    s = add("qpd", cmd_qpd, "quasi-projective dimension")
    s.add_argument("module")
    s.add_argument("--complex", help="verify this complex as a QPR instead of searching")
    add("qpl", cmd_qpl, "upper bound for quasi-projective length").add_argument("module")
    s = add("fkh", cmd_fkh, "free Koszul homology test")
    s.add_argument("ring")
    s.add_argument("--ideal", required=True)
    s = add("link", cmd_link, "linkage by a regular sequence")
    s.add_argument("ring")
    s.add_argument("--ideal", required=True)
    s.add_argument("--seq", default="")
    add("check", cmd_check, "run one corpus item").add_argument("id")
    add("verify-corpus", cmd_verify_corpus, "run the built-in corpus", aliases=["verify-paper"])
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    corpus_cmd = a.fn in (cmd_verify_corpus, cmd_check)
    show = render_corpus if corpus_cmd else render
    try:
        report = a.fn(a)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationFailed as e:
        print(show(e.report, a.format))
        return EXIT_FAIL
    except (RingError, ComplexError, ArithmeticError) as e:
        print(render({"error": f"{type(e).__name__}: {e}"}, a.format))
        return EXIT_FAIL
    print(show(report, a.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
