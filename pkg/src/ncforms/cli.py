"""Batch command-line front end.

Every subcommand reads exact-scalar input files, runs one of the library's
checks or reports, and emits a deterministic tab-separated table (or the
same data as structured JSON).  The exit code is 0 exactly when every
requested check passed.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import WindowOverflowError, validate_algebra
from .chern import (
    ch_boundary_residual,
    ch_even,
    ch_odd,
    closedness_check,
    pair,
    tau_even,
    tau_odd,
    transgression_check,
)
from .homology import (
    Connection,
    connecting_map_check,
    cyclic_report,
    de_rham_report,
    hochschild_report,
    homotopy_check,
    hp_stabilization,
    quasi_free_check,
    sbi_check,
    six_term_check,
)
from .identities import identity_suite
from .io_formats import (
    FormatError,
    format_element,
    format_form,
    load_algebra,
    load_extension,
    load_fredholm,
    load_homotopy,
    parse_element,
)
from .reporting import emit, save_bar_figure
from .scalars import format_scalar
from .tensor_algebra import (
    idempotent_residual,
    invertible_residuals,
    lift_idempotent,
    lift_invertible,
)


class SizeCapError(Exception):
    """A requested computation exceeds the configured size cap."""


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _capped_algebra(args):
    A = load_algebra(args.algebra)
    if A.dim > args.size_cap:
        raise SizeCapError(
            f"size cap exceeded: algebra {A.name} has dimension {A.dim}, "
            f"--size-cap is {args.size_cap}"
        )
    return A


def _dims_report(args, out, report, stem):
    rows = [(r.degree, r.dim) for r in report.rows]
    payload = {
        "kind": report.kind,
        "algebra": report.algebra,
        "dims": {str(r.degree): r.dim for r in report.rows},
    }
    footer = None
    if args.figures:
        path = save_bar_figure(
            args.figures,
            f"{stem}_{report.algebra}",
            f"{report.kind}({report.algebra})",
            [r.degree for r in report.rows],
            [r.dim for r in report.rows],
        )
        payload["figure"] = path
        footer = f"figure\t{path}"
    emit(args.format, ("degree", "dim"), rows, payload, footer=footer, out=out)
    return 0


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_validate(args, out):
    A = _capped_algebra(args)
    report = validate_algebra(A)
    rows = [(A.name, A.dim, _yn(A.unit is not None), _yn(A.window is not None), _yn(report.ok))]
    payload = {
        "algebra": A.name,
        "dim": A.dim,
        "unital": A.unit is not None,
        "windowed": A.window is not None,
        "ok": report.ok,
        "failures": [str(f) for f in report.failures],
    }
    footer = None
    if not report.ok:
        footer = "\n".join(f"failure\t{kind}\t{loc}" for kind, loc, _ in report.failures)
    emit(args.format, ("algebra", "dim", "unital", "windowed", "ok"), rows, payload, footer=footer, out=out)
    return 0 if report.ok else 1


def _cmd_identities(args, out):
    A = _capped_algebra(args)
    report = identity_suite(A, max_degree=args.max_degree, seed=args.seed)
    rows = [(r.label, r.checked, r.failures) for r in report.results]
    summary = f"{report.total} identities, {report.failures} failures"
    payload = {
        "algebra": report.algebra,
        "seed": report.seed,
        "max_degree": report.max_degree,
        "results": {r.label: {"checked": r.checked, "failures": r.failures} for r in report.results},
        "failing": report.failing_labels,
        "summary": summary,
    }
    footer = summary
    if report.failing_labels:
        footer += "\nfailing\t" + "\t".join(report.failing_labels)
    emit(args.format, ("identity", "checked", "failures"), rows, payload, footer=footer, out=out)
    return 0 if report.failures == 0 else 1


def _cmd_hh(args, out):
    A = _capped_algebra(args)
    return _dims_report(args, out, hochschild_report(A, args.max_degree), "hh")


def _cmd_hc(args, out):
    A = _capped_algebra(args)
    return _dims_report(args, out, cyclic_report(A, args.max_degree), "hc")


def _cmd_tower(args, out):
    A = _capped_algebra(args)
    hh = hochschild_report(A, args.max_degree)
    hc = cyclic_report(A, args.max_degree)
    hd = de_rham_report(A, args.max_degree)
    rows = [
        (n, hh.dims[n], hc.dims[n], hd.dims[n]) for n in range(args.max_degree + 1)
    ]
    hp = hp_stabilization(A, max_level=args.max_degree) if args.max_degree >= 3 else None
    payload = {
        "algebra": A.name,
        "rows": {str(r[0]): {"HH": r[1], "HC": r[2], "HD": r[3]} for r in rows},
        "hp": None
        if hp is None
        else {"stabilized": hp.stabilized, "level": hp.level, "even": hp.hp_even, "odd": hp.hp_odd},
    }
    footer_lines = []
    if hp is not None and hp.stabilized:
        footer_lines.append(f"hp\tlevel {hp.level}\teven {hp.hp_even}\todd {hp.hp_odd}")
    if args.figures:
        path = save_bar_figure(
            args.figures,
            f"tower_{A.name}",
            f"HC({A.name})",
            [r[0] for r in rows],
            [r[2] for r in rows],
        )
        payload["figure"] = path
        footer_lines.append(f"figure\t{path}")
    emit(
        args.format,
        ("degree", "HH", "HC", "HD"),
        rows,
        payload,
        footer="\n".join(footer_lines) if footer_lines else None,
        out=out,
    )
    return 0


def _cmd_sbi(args, out):
    A = _capped_algebra(args)
    rows, ok_all = [], True
    payload = {"algebra": A.name, "levels": {}}
    for n in range(1, args.max_degree + 1):
        rep = sbi_check(A, n)
        ok_all = ok_all and rep.ok
        rows.append(
            (
                n,
                _yn(rep.injective),
                _yn(rep.exact_mid[0]),
                _yn(rep.exact_mid[1]),
                _yn(rep.exact_mid[2]),
                _yn(rep.surjective),
                _yn(rep.ok),
            )
        )
        payload["levels"][str(n)] = {
            "injective": rep.injective,
            "exact": list(rep.exact_mid),
            "surjective": rep.surjective,
            "ok": rep.ok,
        }
    payload["ok"] = ok_all
    header = ("n", "injective", "exact_HC", "exact_HH", "exact_HC'", "surjective", "ok")
    emit(args.format, header, rows, payload, out=out)
    return 0 if ok_all else 1


def _cmd_quasifree(args, out):
    A = _capped_algebra(args)
    decided, payload_obj = quasi_free_check(A)
    if decided:
        rows = [(A.name, "yes", len(payload_obj), "-")]
        detail = {"witness_columns": len(payload_obj)}
    else:
        rows = [(A.name, "no", payload_obj.rank, payload_obj.augmented_rank)]
        detail = {
            "rank": payload_obj.rank,
            "augmented_rank": payload_obj.augmented_rank,
        }
    payload = {"algebra": A.name, "quasi_free": decided, "certificate": detail}
    emit(args.format, ("algebra", "quasi_free", "rank", "augmented_rank"), rows, payload, out=out)
    return 0 if decided else 1


def _cmd_lift(args, out):
    A = _capped_algebra(args)
    e = parse_element(A, args.element)
    k = args.k
    if args.mode == "idempotent":
        e_hat = lift_idempotent(A, e, k)
        residuals = [idempotent_residual(e_hat, k)]
        lifted = [("lift", format_form(A, e_hat))]
    else:
        if args.inverse is not None:
            binv = parse_element(A, args.inverse)
        else:
            from .chern import _solve_inverse_minus_one

            binv = _solve_inverse_minus_one(A, e)
        a_hat, b_hat = lift_invertible(A, e, binv, k)
        residuals = list(invertible_residuals(a_hat, b_hat, k))
        lifted = [("lift", format_form(A, a_hat)), ("inverse", format_form(A, b_hat))]
    ok = all(r.is_zero() for r in residuals)
    rows = list(lifted) + [("residual", format_form(A, r)) for r in residuals]
    payload = {
        "algebra": A.name,
        "mode": args.mode,
        "k": k,
        "lift": {name: text for name, text in lifted},
        "residuals": [format_form(A, r) for r in residuals],
        "ok": ok,
    }
    emit(args.format, ("field", "value"), rows, payload, out=out)
    return 0 if ok else 1


def _cmd_chern(args, out):
    fd = load_fredholm(args.fredholm)
    if args.parity != fd.parity:
        raise FormatError(
            f"parity mismatch: requested {args.parity}, "
            f"Fredholm data is {fd.parity} (gamma {'present' if fd.gamma is not None else 'absent'})"
        )
    A = fd.algebra
    x = parse_element(A, args.element)
    k = args.k
    if fd.parity == "even":
        z = ch_even(A, x, k)
        taus = [tau_even(fd, n) for n in range(k)]
        closed_levels = [n for n in range(k) if 2 * n <= 4]
        trans_levels = [n for n in range(k - 1) if 2 * n + 2 <= 4]
    else:
        z = ch_odd(A, x, k)
        taus = [tau_odd(fd, n) for n in range(k)]
        closed_levels = [n for n in range(k) if 2 * n + 1 <= 3]
        trans_levels = [n for n in range(1, k) if 2 * n <= 4]
    residual = ch_boundary_residual(z, fd.parity, k)
    pairings = [pair([taus[n]], z) for n in range(k)]
    closed = {n: closedness_check(fd, taus[n]).ok for n in closed_levels}
    trans = {n: transgression_check(fd, n).ok for n in trans_levels}

    rows = []
    for n in range(k):
        rows.append(
            (
                n,
                format_scalar(pairings[n]),
                _yn(closed[n]) if n in closed else "-",
                _yn(trans[n]) if n in trans else "-",
            )
        )
    level_indep = all(p == pairings[0] for p in pairings)
    ok = (
        residual.is_zero()
        and level_indep
        and all(closed.values())
        and all(trans.values())
    )
    payload = {
        "parity": fd.parity,
        "algebra": A.name,
        "k": k,
        "pairings": {str(n): format_scalar(pairings[n]) for n in range(k)},
        "closed": {str(n): v for n, v in closed.items()},
        "transgression": {str(n): v for n, v in trans.items()},
        "residual_zero": residual.is_zero(),
        "level_independent": level_indep,
        "ok": ok,
    }
    footer = f"pairing\t{format_scalar(pairings[0])}\nresidual\t{format_form(A, residual)}"
    emit(args.format, ("level", "pairing", "closed", "transgression"), rows, payload, footer=footer, out=out)
    return 0 if ok else 1


def _cmd_excision(args, out):
    ext, alt_s = load_extension(args.extension)
    rep = six_term_check(ext, args.max_degree)
    conn_rep = connecting_map_check(ext, min(2, args.max_degree), alt_s=alt_s)
    rows = []
    for lv in rep.levels:
        rows.append(
            (
                lv.level,
                "{}:{}".format(*lv.dims["rel"]),
                "{}:{}".format(*lv.dims["E"]),
                "{}:{}".format(*lv.dims["Q"]),
                _yn(lv.ok),
            )
        )
    ok = rep.ok and conn_rep.ok
    payload = {
        "levels": {
            str(lv.level): {"dims": lv.dims, "exact": lv.exact, "ok": lv.ok}
            for lv in rep.levels
        },
        "connecting": {
            "in_kernel": conn_rep.in_kernel,
            "squares_zero": conn_rep.squares_zero,
            "section_independent": conn_rep.section_independent,
        },
        "ok": ok,
    }
    footer = (
        f"connecting\tin_kernel {_yn(conn_rep.in_kernel)}"
        f"\tsquares_zero {_yn(conn_rep.squares_zero)}"
        f"\tsection_independent {_yn(conn_rep.section_independent)}"
    )
    emit(args.format, ("level", "rel", "E", "Q", "exact"), rows, payload, footer=footer, out=out)
    return 0 if ok else 1


def _cmd_homotopy(args, out):
    Phi = load_homotopy(args.homotopy)
    decided, phi = quasi_free_check(Phi.source)
    if not decided:
        raise FormatError(
            f"source algebra {Phi.source.name} is not quasi-free; "
            "no connection is available for the chain homotopy"
        )
    rep = homotopy_check(Phi, Connection(Phi.source, phi))
    rows = [
        (
            _yn(rep.lemma_generators),
            _yn(rep.eta_descends),
            _yn(rep.chain_homotopy),
            _yn(rep.ok),
        )
    ]
    payload = {
        "source": Phi.source.name,
        "target": Phi.target.name,
        "lemma_generators": rep.lemma_generators,
        "eta_descends": rep.eta_descends,
        "chain_homotopy": rep.chain_homotopy,
        "ok": rep.ok,
    }
    emit(
        args.format,
        ("lemma_generators", "eta_descends", "chain_homotopy", "ok"),
        rows,
        payload,
        out=out,
    )
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=4, metavar="N")
    common.add_argument("--k", type=int, default=3, metavar="K")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--size-cap", type=int, default=2048, metavar="C")
    common.add_argument("--format", choices=("table", "structured"), default="table")
    common.add_argument("--figures", metavar="DIR", default=None,
                        help="also render figures for report output into DIR")

    parser = argparse.ArgumentParser(
        prog="ncforms",
        description="Exact checks and homology reports for noncommutative forms.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, handler, help_text, **extra_args):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for flag, kw in extra_args.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kw)
        p.set_defaults(handler=handler)
        return p

    alg = {"algebra": {"required": True, "metavar": "FILE|NAME"}}
    add("validate", _cmd_validate, "check an algebra table", **alg)
    add("identities", _cmd_identities, "run the operator-identity suite", **alg)
    add("hh", _cmd_hh, "Hochschild homology dimensions", **alg)
    add("hc", _cmd_hc, "cyclic homology dimensions", **alg)
    add("tower", _cmd_tower, "Hodge-tower report (HH, HC, HD, HP)", **alg)
    add("sbi", _cmd_sbi, "five-term SBI exactness", **alg)
    add("quasifree", _cmd_quasifree, "quasi-freeness decision with certificate", **alg)
    add(
        "lift",
        _cmd_lift,
        "lift an idempotent or quasi-inverse pair through the truncation",
        **alg,
        mode={"choices": ("idempotent", "invertible"), "required": True},
        element={"required": True, "metavar": "LITERAL"},
        inverse={"metavar": "LITERAL", "default": None},
    )
    add(
        "chern",
        _cmd_chern,
        "character pairing with closedness and transgression report",
        fredholm={"required": True, "metavar": "FILE"},
        element={"required": True, "metavar": "LITERAL"},
        parity={"choices": ("even", "odd"), "required": True},
    )
    add(
        "excision",
        _cmd_excision,
        "six-term sequence of a split extension",
        extension={"required": True, "metavar": "FILE"},
    )
    add(
        "homotopy",
        _cmd_homotopy,
        "chain-homotopy invariance of a polynomial family",
        homotopy={"required": True, "metavar": "FILE"},
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, sys.stdout)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WindowOverflowError as exc:
        print(f"error: window overflow: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
