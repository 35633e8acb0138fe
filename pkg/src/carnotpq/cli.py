"""Command-line interface.

Exit codes: 0 when the command succeeds and its verdict is positive, 1 when
the verdict is negative (or the operation reports an obstruction), 2 when
the input is malformed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import catalog as catalog_mod
from .documents import (
    DocumentError,
    algebra_document,
    dumps,
    jsonable,
    load_file,
    loads,
    presentation_document,
    to_document,
)
from .field import Field
from .forms import Form, MultiVector, identity_suite, interior, theta_monomial, volume_form, wedge_vectors
from .lie import GradedAlgebra, GradedMap, is_automorphism, validate
from .pullback import (
    admissible_pair,
    check_block_locality,
    is_diagonal_dim1,
    make_beta,
    make_gamma,
    make_omega_ij,
    make_tau_diff,
    sample_automorphisms,
    verify_adjugate,
    verify_degree2_suite,
    verify_higher_suite,
    verify_key_wedge_diagonal,
    verify_omega_pullback,
    verify_tau_pullback,
    z_multivector,
)
from .product_quotient import (
    COMPLEX,
    REAL,
    BuiltPresentation,
    Presentation,
    aut_verify,
    build,
    complex_first_layer_witnesses,
    conformal_decompose,
    factor_lambda_s_p,
    finest_partition,
    hprime_orbits,
    normalize_dim1,
    verify_axioms,
)
from .structure import classify_trichotomy, heisenberg_summands

OK, FAILED, MALFORMED = 0, 1, 2


class CommandError(Exception):
    """An operation-level obstruction; reported with exit code 1."""


# ---------------------------------------------------------------------------
# helpers


def _read(path: str):
    if path == "-":
        return loads(sys.stdin.read())
    return load_file(path)


def _algebra(obj) -> GradedAlgebra:
    if isinstance(obj, GradedAlgebra):
        return obj
    if isinstance(obj, Presentation):
        return build(obj).quotient
    raise DocumentError("expected an algebra or presentation document")


def _presentation(obj) -> Presentation:
    if not isinstance(obj, Presentation):
        raise DocumentError("expected a presentation document")
    return obj


def _map(obj) -> GradedMap:
    if not isinstance(obj, GradedMap):
        raise DocumentError("expected a map document")
    return obj


def _sorted_subspaces(spaces):
    return sorted(range(len(spaces)), key=lambda i: spaces[i].pivots)


# ---------------------------------------------------------------------------
# commands; each returns (report, ok)


def cmd_validate(obj) -> tuple[dict, bool]:
    g = _algebra(obj)
    violations = validate(g)
    report = {
        "valid": not violations,
        "dim": g.dim,
        "nu": g.homogeneous_dimension(),
        "layers": list(g.layer_dims),
        "step": g.step,
        "violations": [{"kind": v.kind, "message": v.message, "witness": v.witness} for v in violations],
    }
    return report, not violations


def _witnesses(obj, g: GradedAlgebra, extra) -> tuple[list, list]:
    real, cplx = [], []
    for v in extra or []:
        if len(v) == g.dim:
            real.append(v)
        elif len(v) == 2 * g.dim:
            cplx.append(v)
        else:
            raise DocumentError(f"witness of length {len(v)} fits neither the algebra nor its complexification")
    if isinstance(obj, Presentation) and obj.F == COMPLEX:
        cplx += complex_first_layer_witnesses(build(obj))
    return real, cplx


def cmd_classify(obj, witnesses=None) -> tuple[dict, bool]:
    g = _algebra(obj)
    real, cplx = _witnesses(obj, g, witnesses)
    v = classify_trichotomy(g, real, cplx)
    report = {
        "verdict": v.kind,
        "label": v.label(),
        "F": v.F,
        "n": v.n,
        "m": v.m,
        "W_dim": v.W.dim if v.W is not None else None,
        "W": v.W,
        "summands": [S.dim for S in v.summands],
        "reason": v.reason,
    }
    return report, v.kind != "inconclusive"


def cmd_decompose(obj, witnesses=None) -> tuple[dict, bool]:
    g = _algebra(obj)
    if g.step != 2:
        raise CommandError("decomposition needs a step-2 algebra")
    real, cplx = _witnesses(obj, g, witnesses)
    dec = heisenberg_summands(g, real)
    if dec.status == "recognized" or dec.status == "refuted":
        order = _sorted_subspaces(dec.first_layers)
        report = {
            "status": dec.status,
            "over": "real",
            "m": [dec.m[i] for i in order],
            "first_layers": [dec.first_layers[i] for i in order],
            "reason": dec.reason,
            "witness": dec.witness,
        }
        return report, dec.status == "recognized"
    v = classify_trichotomy(g, real, cplx)
    if v.F == COMPLEX and v.summands:
        order = _sorted_subspaces(v.summands)
        dims = [v.summands[i].dim for i in order]
        report = {"status": "recognized", "over": "complex", "m": [d // 4 for d in dims], "first_layers": [v.summands[i] for i in order], "reason": ""}
        return report, True
    return {"status": dec.status, "over": "real", "m": [], "first_layers": [], "reason": dec.reason}, False


def cmd_pq_verify(obj) -> tuple[dict, bool]:
    p = _presentation(obj)
    rep = verify_axioms(p)
    failed = [k for k, r in rep.results.items() if not r.passed]
    report = {
        "passed": rep.passed,
        "failed": failed,
        "axioms": {k: r.to_dict() for k, r in rep.results.items()},
        "witnesses": {k: rep.results[k].witness for k in failed},
    }
    return report, rep.passed


def cmd_pq_build(obj) -> tuple[dict, bool]:
    p = _presentation(obj)
    bp = build(p)
    q = bp.quotient
    report = {
        "N": q.dim,
        "nu": q.homogeneous_dimension(),
        "layers": list(q.layer_dims),
        "ambient_layers": list(bp.ambient.layer_dims),
        "quotient": algebra_document(q),
    }
    return report, True


def cmd_pq_partition(obj) -> tuple[dict, bool]:
    p = _presentation(obj)
    blocks = conformal_decompose(p)
    report = {
        "partition": finest_partition(p),
        "blocks": [{"factors": blk, "presentation": presentation_document(sub)} for blk, sub in blocks],
    }
    return report, True


def cmd_pq_normalize(obj) -> tuple[dict, bool]:
    p = _presentation(obj)
    try:
        diag, psi, induced = normalize_dim1(p)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    M = psi.block(2)
    report = {
        "psi_second_layer": [M.rows[i][i] for i in range(M.nrows)],
        "psi": psi,
        "diagonal": presentation_document(diag),
        "quotient_isomorphism": induced,
    }
    return report, True


def _fixes_K(p: Presentation, M) -> bool:
    return all(M.apply(k) == tuple(k) for k in p.K_subspace().basis)


def cmd_aut_check(obj, map_obj) -> tuple[dict, bool]:
    phi = _map(map_obj)
    if isinstance(obj, GradedAlgebra):
        ok = is_automorphism(obj, phi)
        return {"automorphism": ok, "reason": "" if ok else "not a graded automorphism"}, ok
    p = _presentation(obj)
    blocks = phi.blocks()
    A1 = blocks[0]
    A2 = blocks[1] if len(blocks) > 1 else None
    rep = aut_verify(p, A1, A2)
    report = {"automorphism": rep.ok, "reason": rep.reason, "witness": rep.witness, "second_layer": rep.second_layer}
    if rep.ok:
        try:
            lsp = factor_lambda_s_p(rep.second_layer)
            report["lambda_s_p"] = {"lambda": lsp.lam, "signs": lsp.signs, "sigma": lsp.sigma}
        except ValueError as exc:
            report["lambda_s_p"] = {"error": str(exc)}
        report["fixes_K_pointwise"] = _fixes_K(p, rep.second_layer)
        report["quotient_map"] = rep.quotient_map
    return report, rep.ok


def cmd_aut_orbits(obj) -> tuple[dict, bool]:
    p = _presentation(obj)
    try:
        rep = hprime_orbits(p)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    one = Field(p.d)(1)
    forced = all(all(x == one for x in D) for D in rep.realizable.values())
    report = {
        "orbits": rep.orbits,
        "block_dims": rep.block_dims,
        "blocks_one_dimensional": rep.blocks_one_dimensional,
        "realizable": [{"sigma": list(s), "D": D} for s, D in sorted(rep.realizable.items())],
        "forced_identity": forced,
    }
    return report, True


def cmd_forms_suite(obj, samples: int = 5, seed: int = 0) -> tuple[dict, bool]:
    g = _algebra(obj)
    results = identity_suite(g, random_samples=samples, seed=seed)
    ok = all(r.passed for r in results)
    return {"passed": ok, "results": [r.to_dict() for r in results]}, ok


def _parse_indices(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise DocumentError(f"bad index list {text!r}") from exc


def parse_form_spec(spec: str, obj) -> Form:
    """Forms named on the command line.

    ``@FILE`` reads a form document.  Named forms on a presentation:
    ``omega``, ``gamma:i``, ``tau:i,j``, ``omega_ij:i,j``, ``beta:m``,
    ``ix_beta:m,x``, ``iz_omega:m_0,...``, ``ix_iz_omega:x;m_0,...``.  On any
    algebra: ``theta:i,j,...`` and ``i_omega:i,j,...`` (contraction of the
    volume form by basis vectors).
    """
    if spec.startswith("@"):
        f = load_file(spec[1:])
        if not isinstance(f, Form):
            raise DocumentError("expected a form document")
        return f
    g = _algebra(obj)
    name, _, arg = spec.partition(":")
    if name == "theta":
        return theta_monomial(g.dim, _parse_indices(arg), g.d)
    if name == "i_omega":
        idx = _parse_indices(arg)
        mv = wedge_vectors([g.basis_vector(i) for i in idx], g.dim, g.d)
        return interior(mv, volume_form(g.dim, g.d))
    if name == "omega" and not isinstance(obj, Presentation):
        return volume_form(g.dim, g.d)
    if not isinstance(obj, Presentation):
        raise DocumentError(f"form {name!r} needs a presentation document")
    bp = build(obj)
    F = Field(obj.d)
    try:
        if name == "omega":
            return bp.omega()
        if name == "gamma":
            (i,) = _parse_indices(arg)
            return make_gamma(bp, i)
        if name == "tau":
            i, j = _parse_indices(arg)
            return make_tau_diff(bp, i, j)
        if name == "omega_ij":
            i, j = _parse_indices(arg)
            return make_omega_ij(bp, i, j)
        if name == "beta":
            (m,) = _parse_indices(arg)
            return make_beta(bp, m)
        if name == "ix_beta":
            m, x = _parse_indices(arg)
            return interior(bp.quotient.basis_vector(x), make_beta(bp, m))
        if name == "iz_omega":
            coeffs = [F(c) for c in _parse_indices(arg)]
            return interior(z_multivector(bp, coeffs), bp.omega())
        if name == "ix_iz_omega":
            xs, _, ms = arg.partition(";")
            (x,) = _parse_indices(xs)
            coeffs = [F(c) for c in _parse_indices(ms)]
            return interior(bp.quotient.basis_vector(x), interior(z_multivector(bp, coeffs), bp.omega()))
    except ValueError as exc:
        raise DocumentError(f"bad form spec {spec!r}: {exc}") from exc
    raise DocumentError(f"unknown form spec {spec!r}")


def cmd_pullback_admissible(obj, alpha_spec: str, beta_spec: str) -> tuple[dict, bool]:
    g = _algebra(obj)
    alpha = parse_form_spec(alpha_spec, obj)
    beta = parse_form_spec(beta_spec, obj)
    rep = admissible_pair(g, alpha, beta)
    return rep.to_dict(), rep.admissible


def _suite_summary(rep) -> dict:
    return {"passed": rep.passed, "results": [r.to_dict() for r in rep.results], "info": rep.info}


def cmd_pullback_identities(obj, aut_obj=None, samples: int = 10, seed: int = 0) -> tuple[dict, bool]:
    p = _presentation(obj)
    report: dict = {}
    ok = True
    if p.F == REAL and p.m == 1 and p.K_subspace().dim == 1:
        normalized = not is_diagonal_dim1(p)
        if normalized:
            try:
                p, _, _ = normalize_dim1(p)
            except ValueError as exc:
                raise CommandError(str(exc)) from exc
            if aut_obj is not None:
                raise CommandError("automorphisms can only be supplied for an already diagonal presentation")
        bp = build(p)
        table = verify_key_wedge_diagonal(bp)
        report["case"] = "diagonal"
        report["normalized"] = normalized
        report["key_wedge"] = {
            "passed": table.passed,
            "rows": len(table.rows),
            "closed": sum(1 for c in table.closedness if c["closed"]),
            "global_sign_flip": table.global_sign_flip,
            "failures": [r.to_dict() for r in table.failures()],
        }
        ok = table.passed
        auts = _automorphisms(p, aut_obj, samples, seed)
        pulls = []
        for phi in auts:
            t = verify_tau_pullback(bp, phi)
            o = verify_omega_pullback(bp, phi)
            pulls.append({"tau": t["passed"], "omega": o["passed"], "lambda": t["lambda"], "sigma": t["sigma"]})
            ok = ok and t["passed"] and o["passed"]
        report["pullbacks"] = pulls
    elif p.F == REAL and p.m == 1:
        bp = build(p)
        report["case"] = "conformal"
        suites = []
        for phi in _automorphisms(p, aut_obj, samples, seed):
            try:
                d2 = verify_degree2_suite(bp, phi)
                adj = verify_adjugate(bp, phi)
            except ValueError as exc:
                suites.append({"passed": False, "error": str(exc)})
                ok = False
                continue
            suites.append({"passed": d2.passed and adj.passed, "degree2": _suite_summary(d2), "adjugate": _suite_summary(adj)})
            ok = ok and d2.passed and adj.passed
        report["automorphisms"] = suites
    else:
        bp = build(p)
        rep = verify_higher_suite(bp)
        report["case"] = "two-vector"
        report["kernel_dims"] = rep.info["kernel_dims"]
        report["suite"] = _suite_summary(rep)
        ok = rep.passed
        locality = []
        for phi in _automorphisms(p, aut_obj, min(samples, 3), seed):
            loc = check_block_locality(bp, bp.descend_map(phi))
            locality.append({"passed": loc["passed"], "sigma": loc.get("sigma")})
            ok = ok and loc["passed"]
        report["block_locality"] = locality
    report["passed"] = ok
    return report, ok


def _automorphisms(p: Presentation, aut_obj, samples: int, seed: int) -> list[GradedMap]:
    if aut_obj is None:
        return sample_automorphisms(p, samples, seed)
    phi = _map(aut_obj)
    rep = aut_verify(p, phi.blocks()[0], phi.blocks()[1] if len(phi.blocks()) > 1 else None)
    if not rep.ok:
        raise CommandError(f"supplied map is not a K-preserving automorphism: {rep.reason}")
    return [rep.ambient_map]


def cmd_catalog_list() -> tuple[dict, bool]:
    return {"entries": [{"name": e.name, "description": e.description} for e in catalog_mod.ENTRIES]}, True


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "pq verify": cmd_pq_verify,
    "pq build": cmd_pq_build,
    "pq partition": cmd_pq_partition,
    "pq normalize": cmd_pq_normalize,
    "aut orbits": cmd_aut_orbits,
    "forms suite": cmd_forms_suite,
    "pullback identities": cmd_pullback_identities,
}


def fragment_matches(expected, actual) -> bool:
    """Every key of ``expected`` appears in ``actual`` with an equal value (recursively for dicts)."""
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(k in actual and fragment_matches(v, actual[k]) for k, v in expected.items())
    return expected == actual


def check_entry(entry: catalog_mod.CatalogEntry) -> list[dict]:
    """Run each command named in the entry's expected block and compare."""
    obj = entry.build()
    out = []
    for command, fragment in entry.expected.items():
        report, _ = COMMANDS[command](obj)
        actual = jsonable(report)
        out.append({"command": command, "passed": fragment_matches(fragment, actual), "expected": fragment})
    return out


def cmd_catalog_check(names) -> tuple[dict, bool]:
    entries = [catalog_mod.get(n) for n in names] if names else catalog_mod.ENTRIES
    rows = []
    for e in entries:
        for r in check_entry(e):
            rows.append({"entry": e.name, "command": r["command"], "passed": r["passed"]})
    ok = all(r["passed"] for r in rows)
    return {"passed": ok, "checks": rows}, ok


# ---------------------------------------------------------------------------
# output


def render_text(report, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k, v in report.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(report, list):
        for v in report:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(pad + _inline(report))
    return "\n".join(line for line in lines if line)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def _scalars_inline(v):
    if isinstance(v, dict):
        if set(v) == {"a", "b"}:
            return f"{v['a']}" if v["b"] in ("0", 0) else f"{v['a']} + {v['b']}*sqrt(d)"
        return {k: _scalars_inline(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_scalars_inline(x) for x in v]
    return v


def emit(report: dict, fmt: str, out=None):
    out = out or sys.stdout
    data = jsonable(report)
    if fmt == "json":
        out.write(dumps(data))
    else:
        out.write(render_text(_scalars_inline(data)) + "\n")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("json", "text"), default="text", help="output format")

    parser = argparse.ArgumentParser(prog="carnotpq", description="Graded Lie algebras, product quotients and invariant forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check antisymmetry, grading, Jacobi and stratification")
    p.add_argument("file")
    p = sub.add_parser("classify", parents=[common], help="rank-one trichotomy verdict")
    p.add_argument("file")
    p.add_argument("--witness", help="vectors document with extra first-layer witnesses")
    p = sub.add_parser("decompose", parents=[common], help="Heisenberg summands of a step-2 algebra")
    p.add_argument("file")
    p.add_argument("--witness", help="vectors document with extra first-layer witnesses")

    pq = sub.add_parser("pq", help="product-quotient pipeline").add_subparsers(dest="pq_command", required=True)
    for name, text in (
        ("verify", "check the product-quotient axioms"),
        ("build", "build the quotient algebra"),
        ("partition", "finest K-compatible partition and blocks"),
        ("normalize", "rescale a one-dimensional K to the diagonal"),
    ):
        p = pq.add_parser(name, parents=[common], help=text)
        p.add_argument("file")

    aut = sub.add_parser("aut", help="graded automorphisms").add_subparsers(dest="aut_command", required=True)
    p = aut.add_parser("check", parents=[common], help="verify a map, factor its second layer")
    p.add_argument("file")
    p.add_argument("--map", required=True, help="map document (first-layer block, optional second-layer block)")
    p = aut.add_parser("orbits", parents=[common], help="orbits of permutations fixing K pointwise")
    p.add_argument("file")

    forms = sub.add_parser("forms", help="exterior calculus").add_subparsers(dest="forms_command", required=True)
    p = forms.add_parser("suite", parents=[common], help="contraction identities and d^2 = 0")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=5, help="random non-basis tuples per identity")
    p.add_argument("--seed", type=int, default=0)

    pb = sub.add_parser("pullback", help="pullback admissibility and identities").add_subparsers(dest="pb_command", required=True)
    p = pb.add_parser("admissible", parents=[common], help="admissibility of a form pair")
    p.add_argument("file")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p = pb.add_parser("identities", parents=[common], help="wedge identities for the presentation's shape")
    p.add_argument("file")
    p.add_argument("--aut", help="map document of a K-preserving automorphism")
    p.add_argument("--samples", type=int, default=10, help="sampled automorphisms when --aut is absent")
    p.add_argument("--seed", type=int, default=0)

    cat = sub.add_parser("catalog", help="built-in examples").add_subparsers(dest="catalog_command", required=True)
    cat.add_parser("list", parents=[common])
    p = cat.add_parser("emit", help="print an entry's document")
    p.add_argument("name")
    p = cat.add_parser("check", parents=[common], help="reproduce the expected-results blocks")
    p.add_argument("names", nargs="*")
    return parser


def _dispatch(args) -> tuple[dict, bool]:
    c = args.command
    if c == "validate":
        return cmd_validate(_read(args.file))
    if c == "classify":
        w = _read(args.witness) if args.witness else None
        return cmd_classify(_read(args.file), w)
    if c == "decompose":
        w = _read(args.witness) if args.witness else None
        return cmd_decompose(_read(args.file), w)
    if c == "pq":
        fn = {"verify": cmd_pq_verify, "build": cmd_pq_build, "partition": cmd_pq_partition, "normalize": cmd_pq_normalize}
        return fn[args.pq_command](_read(args.file))
    if c == "aut":
        if args.aut_command == "check":
            return cmd_aut_check(_read(args.file), _read(args.map))
        return cmd_aut_orbits(_read(args.file))
    if c == "forms":
        return cmd_forms_suite(_read(args.file), args.samples, args.seed)
    if c == "pullback":
        if args.pb_command == "admissible":
            return cmd_pullback_admissible(_read(args.file), args.alpha, args.beta)
        aut = _read(args.aut) if args.aut else None
        return cmd_pullback_identities(_read(args.file), aut, args.samples, args.seed)
    if c == "catalog":
        if args.catalog_command == "list":
            return cmd_catalog_list()
        if args.catalog_command == "check":
            return cmd_catalog_check(args.names)
    raise DocumentError(f"unknown command {c!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return MALFORMED if exc.code else OK
    if args.command == "catalog" and args.catalog_command == "emit":
        try:
            entry = catalog_mod.get(args.name)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return MALFORMED
        sys.stdout.write(dumps(to_document(entry.build())))
        return OK
    fmt = getattr(args, "report", "text")
    try:
        report, ok = _dispatch(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED
    except CommandError as exc:
        emit({"passed": False, "error": str(exc)}, fmt)
        return FAILED
    emit(report, fmt)
    return OK if ok else FAILED


if __name__ == "__main__":
    sys.exit(main())
