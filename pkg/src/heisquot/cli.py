"""heisquot command line.

    heisquot field    -p 3 -e 3
    heisquot family   -p 3 -e 3
    heisquot iso      -p 3 -e 3 --n1 1,0,0 --n2 2,0,0
    heisquot classify -p 3 -e 5
    heisquot profile  -p 3 -e 2 --slow
    heisquot verify   -p 3 -e 2

Output is one JSON record per line by default, starting with a provenance
record.  Exit status: 0 ok, 1 a verification failed, 2 usage error or a
refused (too large) request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from heisquot import __version__
from heisquot.brahana import eliminate
from heisquot.ff import FqField, fq_mul, poly_from_str
from heisquot.formats import matrix_to_str, subspace_from_str
from heisquot.heisenberg import (
    AutElem,
    aut_map,
    build,
    enum_codim2,
    field_multiply,
    quotient_pencil,
)
from heisquot.isotest import (
    ScaleError,
    canonical_label,
    check_scale,
    classify_ctx,
    iso_test,
    verify_certificate,
)
from heisquot.profile import (
    DEFAULT_ORDER_LIMIT,
    BudgetExceeded,
    SmallGroup,
    brute_profile,
    enum_subgroups,
    formula_profile,
    group_fingerprint,
    quotient_profile,
    stratify,
)
from heisquot.tensoradj import adjoint_algebra, is_heisenberg_quotient

log = logging.getLogger("heisquot")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("-e", type=int, default=3, help="extension degree (default 3)")
    common.add_argument("--seed", type=int, default=0, help="offset for the modulus search")
    common.add_argument("--modulus", help="coefficients low to high, e.g. 1,0,1; overrides the search")
    common.add_argument("--format", choices=["json-lines", "csv", "human"], default="json-lines")
    common.add_argument("--out", help="write records here instead of stdout")
    common.add_argument("--unsafe-scale", action="store_true", help="lift the size guards")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="heisquot", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"heisquot {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[common], help="modulus and structure matrices")
    sub.add_parser("family", parents=[common], help="all quotients H/N with their pencils")
    iso = sub.add_parser("iso", parents=[common], help="test H/N1 against H/N2")
    iso.add_argument("--n1", required=True, help="basis of N1, rows ';'-separated")
    iso.add_argument("--n2", required=True, help="basis of N2")
    sub.add_parser("classify", parents=[common], help="orbit partition of the family")
    prof = sub.add_parser("profile", parents=[common], help="quotient and subgroup profiles")
    prof.add_argument("--gen-bound", type=int, default=None, help="only subgroups with d(K) <= k")
    prof.add_argument("--slow", action="store_true", help="also enumerate subgroups of H(F_q) (order 729 at p=3, e=2)")
    sub.add_parser("verify", parents=[common], help="run the invariant checks for (p, e)")
    return ap


# -- output -----------------------------------------------------------------------


def _flat(rec):
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v) for k, v in rec.items()}


def render(records, fmt):
    if fmt == "json-lines":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if fmt == "human":
        lines = []
        for r in records:
            kind = r.get("record", "")
            body = "  ".join(f"{k}={v}" for k, v in sorted(_flat(r).items()) if k != "record")
            lines.append(f"[{kind}] {body}")
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = None
    for r in records:
        flat = _flat(r)
        keys = sorted(flat)
        if keys != header:
            header = keys
            w.writerow(keys)
        w.writerow([flat[k] for k in keys])
    return buf.getvalue()


def provenance(args, field):
    return {
        "record": "provenance",
        "tool": "heisquot",
        "version": __version__,
        "command": args.command,
        "p": args.p,
        "e": args.e,
        "seed": args.seed,
        "modulus": list(field.modulus),
    }


# -- commands -----------------------------------------------------------------------


def cmd_field(args, ctx):
    F = ctx.field
    yield {"record": "field", "order": F.order, "modulus": list(F.modulus)}
    for k, S in enumerate(F.struct_mats):
        yield {"record": "structure_matrix", "k": k, "matrix": matrix_to_str(S)}
    return EXIT_OK


def cmd_family(args, ctx):
    check_scale(args.p, args.e, args.unsafe_scale)
    for N in enum_codim2(ctx.field):
        m = quotient_pencil(ctx, N)
        yield {
            "record": "member",
            "N": str(N),
            "complement": list(m.complement),
            "L1": matrix_to_str(m.raw.mats[0]),
            "L2": matrix_to_str(m.raw.mats[1]),
            "a": list(m.a),
        }
    return EXIT_OK


def cmd_iso(args, ctx):
    n1 = subspace_from_str(args.n1, args.p, args.e)
    n2 = subspace_from_str(args.n2, args.p, args.e)
    cert = iso_test(ctx, n1, n2)
    if cert is None:
        yield {"record": "iso", "verdict": "NONISO", "N1": str(n1), "N2": str(n2)}
        return EXIT_OK
    ok = verify_certificate(ctx, cert, rng=args.seed)
    yield {
        "record": "iso",
        "verdict": "ISO",
        "N1": str(n1),
        "N2": str(n2),
        "certificate": cert.record(),
        "map": matrix_to_str(cert.map.matrix),
        "verified": ok,
    }
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args, ctx):
    C = classify_ctx(ctx, unsafe=args.unsafe_scale)
    rep = C.report()
    yield dict(rep, record="classification")
    return EXIT_OK if rep["class_count"] == rep["burnside_count"] else EXIT_FAIL


def _records(report, **extra):
    for r in report.records():
        yield dict(r, record="profile", **extra)


def cmd_profile(args, ctx):
    check_scale(args.p, args.e, args.unsafe_scale)
    if args.e >= 2:
        m = quotient_pencil(ctx, enum_codim2(ctx.field)[0])
        yield from _records(quotient_profile(m), basis="quotient")
    if not args.slow:
        return EXIT_OK
    limit = None if args.unsafe_scale else DEFAULT_ORDER_LIMIT
    G = SmallGroup(ctx.pencil, order_limit=limit or ctx.pencil.order)
    Q, _ = eliminate(ctx.pencil, drop_rows=[ctx.pencil.r - 1], drop_cols=[], drop_mats=[])
    M = SmallGroup(Q, order_limit=limit or Q.order)
    subs = enum_subgroups(G, gen_bound=args.gen_bound)
    brute = brute_profile(G, subs)
    yield from _records(brute, basis="brute")
    formula = formula_profile(stratify(M), args.p, group_fingerprint(G).d)
    if args.gen_bound is not None:
        formula.classes = {fp: c for fp, c in formula.classes.items() if fp.d <= args.gen_bound}
    yield from _records(formula, basis="formula")
    yield {"record": "profile_check", "formula_equals_brute": formula == brute}
    return EXIT_OK if formula == brute else EXIT_FAIL


def run_suite(ctx, rng=0, unsafe=False):
    """The invariant checks behind ``verify``: yields (name, passed) pairs."""
    F, P = ctx.field, ctx.pencil
    p, e = ctx.p, ctx.e
    gen = np.random.default_rng(rng)

    xs, ys = P.random_elements(gen, 200), P.random_elements(gen, 200)
    yield "brahana_correspondence", all(
        np.array_equal(P.multiply(x, y), field_multiply(F, x, y)) for x, y in zip(xs, ys)
    )
    els = F.elements()
    pick = gen.integers(0, len(els), size=(50, 2))
    yield "structure_matrices", all(
        np.array_equal(P.pairing(els[i], els[j]), fq_mul(F, els[i], els[j])) for i, j in pick
    )
    yield "adjoint_dimension", adjoint_algebra(P).dim == 4 * e
    phis = [AutElem.random(F, gen) for _ in range(5)]
    yield "automorphisms", all(aut_map(ctx, phi).is_homomorphism(pairs="random", rng=gen, n=500) for phi in phis)
    if e < 2:
        return
    check_scale(p, e, unsafe)
    C = classify_ctx(ctx, unsafe=unsafe)
    yield "burnside", C.class_count == C.burnside
    yield "orbit_sizes", sum(s for _, s in C.orbits()) == len(C.subspaces)
    yield "lower_bound", C.class_count >= -(-(p ** (e - 3)) // e) if e >= 3 else C.class_count >= 1
    sample = [C.subspaces[i] for i in gen.choice(len(C.subspaces), size=min(5, len(C.subspaces)), replace=False)]
    yield "membership", all(is_heisenberg_quotient(quotient_pencil(ctx, N).raw, e).ok for N in sample)
    profiles = {quotient_profile(quotient_pencil(ctx, N)).to_json_lines() for N in sample}
    yield "quotient_profiles", len(profiles) == 1
    certs_ok = True
    for N in sample:
        lab = canonical_label(ctx, N)
        cert = iso_test(ctx, N, lab)
        certs_ok &= cert is not None and verify_certificate(ctx, cert, rng=rng)
    yield "certificates", bool(certs_ok)


def cmd_verify(args, ctx):
    status = EXIT_OK
    for name, ok in run_suite(ctx, args.seed, args.unsafe_scale):
        yield {"record": "check", "name": name, "passed": bool(ok)}
        if not ok:
            status = EXIT_FAIL
    return status


COMMANDS = {
    "field": cmd_field,
    "family": cmd_family,
    "iso": cmd_iso,
    "classify": cmd_classify,
    "profile": cmd_profile,
    "verify": cmd_verify,
}


def _drain(gen, out):
    status = EXIT_OK
    try:
        while True:
            out.append(next(gen))
    except StopIteration as stop:
        status = stop.value if stop.value is not None else EXIT_OK
    return status


def dispatch(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        modulus = poly_from_str(args.modulus, args.p) if args.modulus else None
        field = FqField.create(args.p, args.e, args.seed, modulus)
        ctx = build(field)
        records = [provenance(args, field)]
        status = _drain(COMMANDS[args.command](args, ctx), records)
    except (ScaleError, BudgetExceeded, ValueError) as exc:
        print(f"heisquot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(records, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
