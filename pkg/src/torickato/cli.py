"""Command-line interface.

Exit codes: 0 on success, 1 on invalid input (including unknown flags and
documents that fail validation), 2 when an isomorphism test is inconclusive.
Documents are given as a path, ``-`` for stdin, or ``fixture_<name>``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence, Union

from . import document as doc
from .degenerations import check_degeneration, isotrivial_fan, isotrivial_u, nakamura_fan
from .fans import Fan, fan_validate, is_complete, is_projective
from .invariants import curve_census, invariant_report
from .isomorphism import Answer, find_equivariant_iso
from .kato import (KatoData, Kind, Membership, PerronData, collapsed_fan, germ_report, perron,
                   power_data, support_membership, validate_kato_data)
from .render import render_svg

EXIT_OK, EXIT_INVALID, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(source: str) -> str:
    if source.startswith("fixture_"):
        return doc.fixture_text(source[len("fixture_"):])
    if source == "-":
        return sys.stdin.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _load_data(source: str, validate: bool = True) -> KatoData:
    return doc.parse(_read(source), validate=validate)


def _load_any(source: str) -> Union[KatoData, Fan]:
    text = _read(source)
    return doc.parse_fan(text) if json.loads(text).get("kind") == "fan" else doc.parse(text)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _report(args, data: dict, lines: list[str]) -> None:
    if args.json:
        _emit(args, json.dumps(data, indent=2, ensure_ascii=False, default=str))
    else:
        _emit(args, "\n".join(lines))


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def cmd_validate(args) -> int:
    text = _read(args.doc)
    if json.loads(text).get("kind") == "fan":
        F = doc.parse_fan(text)
        rep = fan_validate(F)
        data = {"kind": "fan", "valid": rep.valid, "reason": rep.reason, "counts": list(rep.counts),
                "regular": rep.regular, "complete": is_complete(F) if rep.valid else None}
        lines = [f"fan: {'valid' if rep.valid else 'invalid'} ({rep.reason})",
                 f"counts: {list(rep.counts)}", f"regular: {rep.regular}"]
        if rep.valid:
            lines.append(f"complete: {data['complete']}")
        _report(args, data, lines)
        return EXIT_OK if rep.valid else EXIT_INVALID
    d = doc.parse(text, validate=False)
    rep = validate_kato_data(d)
    data = {"kind": "kato", "valid": rep.valid, "errors": list(rep.errors)}
    lines = ["Kato data: valid" if rep.valid else "Kato data: invalid"]
    lines += [f"  error: {e}" for e in rep.errors]
    if rep.valid:
        data.update({"type": d.kind.value, "counts": list(d.fan.counts)})
        lines += [f"type: {d.kind.value}", f"counts: {list(d.fan.counts)}"]
    _report(args, data, lines)
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_invariants(args) -> int:
    d = _load_data(args.doc)
    rep = invariant_report(d, args.depth)
    data = rep.as_dict()
    h = rep.hodge
    lines = [
        f"betti: {list(rep.betti)}",
        f"euler characteristic: {rep.euler}",
        f"#D = {rep.sharpD}, #D_T = {rep.sharpDT}",
        f"hodge ({h.status.value}): " + ", ".join(f"h^{p},{q} = {v}" for (p, q), v in sorted(h.values.items())),
    ]
    if h.note:
        lines.append(f"  note: {h.note}")
    for name, dims in rep.log_cohomology.items():
        lines.append(f"{name}: " + ", ".join(f"h^{i} = {v}" for i, v in sorted(dims.items())))
    c = rep.canonical
    lines.append(f"canonical bundle: {c['statement']} with det A = {c['det_A']}; "
                 f"Kodaira dimension {c['kodaira_dimension']}")
    cen = rep.census
    lines.append(f"curves (depth {cen.depth}): {cen.elliptic} elliptic, {cen.rational} rational"
                 + (" [flagged]" if cen.flagged else ""))
    if rep.connectivity is not None:
        cn = rep.connectivity
        lines.append(f"D: {cn['D_components']} component(s); D_T: {cn['DT_components']} component(s)")
    lines.append("metrics: " + ", ".join(f"{k} {v}" for k, v in rep.metrics.items()))
    _report(args, data, lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    d = _load_data(args.doc)
    g = germ_report(d)
    K = d.kato
    data = dict(g)
    data.update({"m0": K.m0, "order": K.order, "cycles": [[j + 1 for j in c] for c in K.cycles]})
    lines = [f"type: {g['kind']}", f"P(A) = {g['P']}", f"m0 = {K.m0}, order of s = {K.order}",
             f"germ: {g['germ']}", f"Inv(F) = {g['Inv(F)']}",
             f"W_T(F) = {g['splitting']['W_T(F)']}"]
    pd = perron(d.A)
    if isinstance(pd, PerronData):
        tol = args.tolerance
        pattern = ["0" if abs(x) < tol else "+" for x in pd.f_star]
        data["perron"] = {"alpha": pd.alpha, "f": list(pd.f), "f_star": list(pd.f_star),
                          "residual": pd.residual, "residual_star": pd.residual_star,
                          "f_star_pattern": "".join(pattern)}
        lines += [f"alpha = {pd.alpha:.12g}",
                  "f = " + _fmt_vec(f"{x:.10g}" for x in pd.f),
                  "f* = " + _fmt_vec(f"{x:.10g}" for x in pd.f_star),
                  f"residuals: {pd.residual:.2e}, {pd.residual_star:.2e}"]
    else:
        data["perron"] = str(pd)
        lines.append(str(pd))
    if args.vector:
        v = tuple(int(x) for x in args.vector.split(","))
        m = support_membership(d, v, margin=args.tolerance)
        data["membership"] = {"vector": list(v), "answer": m.value}
        lines.append(f"{_fmt_vec(v)}: {m.value}")
    _report(args, data, lines)
    return EXIT_OK


def cmd_census(args) -> int:
    d = _load_data(args.doc)
    c = curve_census(d, args.depth)
    data = {"elliptic": c.elliptic, "rational": c.rational, "depth": c.depth, "flagged": c.flagged}
    lines = [f"elliptic curves: {c.elliptic}", f"rational curves: {c.rational}", f"depth: {c.depth}"]
    if c.flagged:
        lines.append("flagged: non-identity permutation; counts are orbit counts")
    _report(args, data, lines)
    return EXIT_OK


def cmd_iso(args) -> int:
    dX, dY = _load_data(args.doc), _load_data(args.other)
    v = find_equivariant_iso(dX, dY, coeff_bound=args.coeff_bound, shift_bound=args.shift_bound)
    data = {"answer": v.answer.value, "certificate": v.certificate}
    if v.witness:
        data["Q"] = [list(r) for r in v.witness[0]]
        data["shift"] = v.witness[1]
    _report(args, data, [str(v)])
    return EXIT_UNKNOWN if v.answer is Answer.UNKNOWN else EXIT_OK


def cmd_degenerate(args) -> int:
    d = _load_data(args.doc)
    if args.u is None:
        D = nakamura_fan(d, args.window)
    else:
        if args.u == "auto":
            res = isotrivial_u(d)
            if not res:
                _report(args, {"u": None, "certificate": res.certificate},
                        [f"no isotrivial degeneration: {res.certificate}"])
                return EXIT_OK
            u = res.u
        else:
            u = tuple(int(x) for x in args.u.split(","))
        D = isotrivial_fan(d, u, args.window)
    chk = check_degeneration(D)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc.serialize(D.central_fiber))
    data = {"kind": D.kind, "Atilde": [list(r) for r in D.Atilde], "window": D.window,
            "u": list(D.u) if D.u else None, "v": list(D.v) if D.v else None, "smooth": D.smooth,
            "central_counts": list(D.central_fiber.counts), "checks": chk}
    lines = [f"{D.kind} degeneration, window {D.window}",
             f"Atilde = {[list(r) for r in D.Atilde]}"]
    if D.u:
        lines.append(f"u = {_fmt_vec(D.u)}, v = {_fmt_vec(D.v)}, smooth: {D.smooth}")
    lines.append(f"truncation: {len(D.truncation.maximal_cones)} maximal cones")
    lines.append(f"central fiber counts: {list(D.central_fiber.counts)}")
    lines += [f"{k}: {v}" for k, v in chk.items()]
    sys.stdout.write(json.dumps(data, indent=2, default=str) + "\n" if args.json else "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_collapse(args) -> int:
    d = _load_data(args.doc)
    F = collapsed_fan(d, args.lower, args.upper)
    rep = fan_validate(F)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc.serialize(F))
    data = {"l": args.lower, "m": args.upper, "counts": list(F.counts), "valid": rep.valid,
            "regular": rep.regular}
    lines = [f"collapsed fan l = {args.lower}, m = {args.upper}", f"counts: {list(F.counts)}",
             f"valid: {rep.valid}, regular: {rep.regular}"]
    sys.stdout.write(json.dumps(data, indent=2) + "\n" if args.json else "\n".join(lines) + "\n")
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_power(args) -> int:
    d = _load_data(args.doc)
    _emit(args, doc.serialize(power_data(d, args.k)))
    return EXIT_OK


def cmd_render(args) -> int:
    x = _load_any(args.doc)
    F = x if isinstance(x, Fan) else x.fan
    _emit(args, render_svg(F))
    return EXIT_OK


def cmd_export(args) -> int:
    x = _load_any(args.doc)
    if args.fan and isinstance(x, KatoData):
        x = x.fan
    _emit(args, doc.serialize(x))
    return EXIT_OK


def cmd_projective(args) -> int:
    x = _load_any(args.doc)
    F = x if isinstance(x, Fan) else x.fan
    sf = is_projective(F)
    if sf is None:
        _report(args, {"projective": False}, ["not projective: no strictly convex support function"])
    else:
        vals = {",".join(map(str, r)): str(h) for r, h in sorted(sf.values.items())}
        _report(args, {"projective": True, "support_function": vals},
                ["projective; support function values on rays:"]
                + [f"  ({r}): {h}" for r, h in vals.items()])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torickato", description="Combinatorics of toric Kato data.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, *, out=True, two=False):
        s = sub.add_parser(name, help=help_)
        s.add_argument("doc", help="document path, '-' or fixture_<name>")
        if two:
            s.add_argument("other", help="second document")
        s.add_argument("--json", action="store_true", help="structured output")
        if out:
            s.add_argument("--out", help="write the main output to this file")
        s.set_defaults(func=fn)
        return s

    add("validate", cmd_validate, "validate a data or fan document", out=False).set_defaults(out=None)
    s = add("invariants", cmd_invariants, "Betti, Hodge, census, connectivity and metric report")
    s.add_argument("--depth", type=int, default=1)
    s = add("classify", cmd_classify, "type, P(A), germ and Perron data")
    s.add_argument("--tolerance", type=float, default=1e-8)
    s.add_argument("--vector", help="comma-separated lattice vector to test against the support")
    s = add("census", cmd_census, "invariant curves", out=False)
    s.set_defaults(out=None)
    s.add_argument("--depth", type=int, default=1)
    s = add("iso", cmd_iso, "equivariant isomorphism test", out=False, two=True)
    s.set_defaults(out=None)
    s.add_argument("--coeff-bound", type=int, default=8)
    s.add_argument("--shift-bound", type=int, default=None)
    s = add("degenerate", cmd_degenerate, "Nakamura or isotrivial degeneration fan")
    s.add_argument("--window", type=int, default=2)
    s.add_argument("--u", help="'auto' or comma-separated u for the isotrivial family")
    s = add("collapse", cmd_collapse, "collapsed fan between two powers of A")
    s.add_argument("--lower", "-l", type=int, default=0)
    s.add_argument("--upper", "-m", type=int, default=1)
    s = add("power", cmd_power, "k-th power of the data as a document")
    s.add_argument("--k", type=int, default=2)
    add("render", cmd_render, "SVG drawing of the fan")
    s = add("export", cmd_export, "canonical document")
    s.add_argument("--fan", action="store_true", help="export only the fan")
    add("projective", cmd_projective, "support function search on a complete fan")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INVALID
    except (doc.DocumentError, ValueError, KeyError, OSError, AssertionError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
