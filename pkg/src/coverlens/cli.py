"""Command-line front end: compute quantities, check lemma instances, reproduce
the embedded worked examples, and run the fuzz gate.

Every command reads declarative JSON inputs and writes a deterministic report:
identical inputs and flags give byte-identical output.  Exit codes: 0 success,
1 check/diff/fuzz failure, 2 invalid input.
"""
from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click

from . import boxlab, covers, fixtures, homothety, lebesgue, oracles
from .covers import CoveringFamily
from .errors import CoverlensError
from .spaces import (
    Axis,
    FiniteMetricSpace,
    SliceSpace,
    space_from_json,
    subset_from_json,
    validate_metric,
)

F = Fraction


def _fail_input(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        _fail_input(f"cannot read {path}: {exc}")


def _load_space(path: str):
    try:
        return space_from_json(_load_json(path))
    except (CoverlensError, ValueError, KeyError) as exc:
        _fail_input(f"bad space file {path}: {exc}")


def _load_family(path: str, space) -> CoveringFamily:
    try:
        return covers.family_from_json(_load_json(path), space)
    except (CoverlensError, ValueError, KeyError) as exc:
        _fail_input(f"bad cover file {path}: {exc}")


def _load_subset(path: str, space):
    try:
        return subset_from_json(_load_json(path), space)
    except (CoverlensError, ValueError, KeyError) as exc:
        _fail_input(f"bad subset file {path}: {exc}")


def parse_ambient(spec: str) -> SliceSpace:
    """A slice from a JSON file path or a compact axis list.

    Compact form: comma-separated axes, each "line", "a:b" (closed interval)
    or a rational "c" (fixed point); e.g. "line,line,0" is the plane slab.
    """
    if os.path.exists(spec):
        space = space_from_json(_load_json(spec))
        if not isinstance(space, SliceSpace):
            _fail_input(f"ambient file {spec} does not describe a slice")
        return space
    axes = []
    for token in spec.split(","):
        token = token.strip()
        if token == "line":
            axes.append(Axis.line())
        elif ":" in token:
            lo, hi = token.split(":", 1)
            axes.append(Axis.interval(Fraction(lo), Fraction(hi)))
        else:
            axes.append(Axis.point(Fraction(token)))
    return SliceSpace(tuple(axes))


def _emit(doc: dict, as_json: bool, lines: list[str]):
    if as_json:
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            click.echo(line)


def _point_str(point) -> str:
    return "(" + ", ".join(str(t) for t in point) + ")"


@click.group()
def main():
    """Exact Lebesgue numbers, meshes and transport bounds for metric covers."""


# ============================================================
# validate
# ============================================================


@main.command()
@click.option("--space", "space_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def validate(space_path: str, as_json: bool):
    """Validate the metric axioms of a space file."""
    space = _load_space(space_path)
    if isinstance(space, SliceSpace):
        _emit({"ok": True, "type": "slice"}, as_json, ["slice spaces are valid by construction"])
        return
    report = validate_metric(space)
    doc = {
        "ok": report.ok,
        "violations": [
            {"kind": v.kind, "witness": list(v.witness), "detail": v.detail}
            for v in report.violations
        ],
        "notes": list(report.notes),
    }
    lines = ["valid metric" if report.ok else "INVALID metric"]
    lines += [f"  {v.kind}: {v.detail}" for v in report.violations]
    lines += [f"  note: {n}" for n in report.notes]
    _emit(doc, as_json, lines)
    if not report.ok:
        sys.exit(2)


# ============================================================
# compute
# ============================================================

VARIANTS = ("L", "Lrad", "Ldiam", "second")


@main.command()
@click.option("--space", "space_path", required=True, type=click.Path())
@click.option("--cover", "cover_path", required=True, type=click.Path())
@click.option("--variant", type=click.Choice(VARIANTS), default="L")
@click.option("--subset", "subset_path", type=click.Path(), default=None)
@click.option("--ambient", "ambient_spec", default=None,
              help="slice override: a JSON file or a compact axis list like 'line,line,0'")
@click.option("--per-point", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def compute(space_path, cover_path, variant, subset_path, ambient_spec, per_point, as_json):
    """Compute a Lebesgue-number variant and the mesh of a cover."""
    space = _load_space(space_path)
    if ambient_spec is not None:
        if not isinstance(space, SliceSpace):
            _fail_input("--ambient only applies to slice spaces")
        ambient = parse_ambient(ambient_spec)
        if ambient.dim != space.dim:
            _fail_input("ambient dimension does not match the space")
        space = ambient
    family = _load_family(cover_path, space)
    subset = _load_subset(subset_path, space) if subset_path else None

    try:
        if isinstance(space, SliceSpace):
            if variant != "L":
                _fail_input(f"variant {variant} needs a finite space")
            if subset is None:
                _fail_input("slice computations need --subset with a closed box")
            res = boxlab.box_lebesgue_relative(space, family, subset)
            m = boxlab.box_mesh(space, family)
            doc = {
                "variant": "L",
                "value": res.value.serialize(),
                "mesh": m.serialize(),
                "certificate": None if res.certificate is None
                else [str(t) for t in res.certificate],
            }
            lines = [f"L = {res.value}, mesh = {m}"]
            if res.certificate is not None:
                lines.append(f"critical point just above the optimum: {_point_str(res.certificate)}")
            _emit(doc, as_json, lines)
            return

        label = {"L": "L", "Lrad": "L_rad", "Ldiam": "L_diam", "second": "L~"}[variant]
        m = covers.mesh(family)
        if variant == "Ldiam":
            value, witness = lebesgue.lebesgue_diam(family)
            doc = {
                "variant": "Ldiam",
                "value": value.serialize(),
                "mesh": m.serialize(),
                "witness": None if witness is None
                else sorted(space.labels[i] for i in witness),
            }
            bad = ("" if witness is None
                   else f", bad set {{{', '.join(sorted(space.labels[i] for i in witness))}}}")
            _emit(doc, as_json, [f"{label} = {value}, mesh = {m}{bad}"])
            return
        fn = {"L": lebesgue.lebesgue_relative, "Lrad": lebesgue.lebesgue_rad,
              "second": lebesgue.second_kind_relative}[variant]
        report = fn(family, subset)
        doc = lebesgue.report_to_json(report, space, per_point=per_point)
        doc["mesh"] = m.serialize()
        lines = [f"{label} = {report.value}, mesh = {m}",
                 f"argmin: {space.labels[report.argmin]}"]
        if per_point:
            lines += [f"  {space.labels[x]}: {v}" for x, v in report.per_point]
        lines += [f"  flag: {f}" for f in report.flags]
        _emit(doc, as_json, lines)
    except CoverlensError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


# ============================================================
# check
# ============================================================


@main.group()
def check():
    """Evaluate a lemma instance and report per-inequality verdicts."""


@check.command("chain")
@click.option("--space", "space_path", required=True, type=click.Path())
@click.option("--cover", "cover_path", required=True, type=click.Path())
@click.option("--subset-a", "a_path", required=True, type=click.Path())
@click.option("--subset-b", "b_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def check_chain(space_path, cover_path, a_path, b_path, as_json):
    """The restriction chain on a finite instance."""
    space = _load_space(space_path)
    if not isinstance(space, FiniteMetricSpace):
        _fail_input("chain checks need a finite space")
    family = _load_family(cover_path, space)
    a = _load_subset(a_path, space)
    b = _load_subset(b_path, space)
    try:
        report = lebesgue.chain_report(family, a, b)
    except CoverlensError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    doc = {
        "l_cover": None if report.l_cover is None else report.l_cover.serialize(),
        "l_ambient": report.l_ambient.serialize(),
        "l_restricted": report.l_restricted.serialize(),
        "l_intrinsic": report.l_intrinsic.serialize(),
        "inequalities": {name: ok for name, ok in report.inequalities},
        "passed": report.passed,
    }
    lines = []
    if report.l_cover is not None:
        lines.append(f"L(U) = {report.l_cover}")
    lines += [
        f"L_X(U,A) = {report.l_ambient}",
        f"L_B(U|B,A) = {report.l_restricted}",
        f"L_A(U|A,A) = {report.l_intrinsic}",
    ]
    lines += [f"  {'PASS' if ok else 'FAIL'}  {name}" for name, ok in report.inequalities]
    _emit(doc, as_json, lines)
    sys.exit(0 if report.passed else 1)


@check.command("l-vs-ldiam")
@click.option("--space", "space_path", required=True, type=click.Path())
@click.option("--cover", "cover_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
def check_l_vs_ldiam(space_path, cover_path, as_json):
    """L <= L_diam <= 2L on a finite instance."""
    space = _load_space(space_path)
    if not isinstance(space, FiniteMetricSpace):
        _fail_input("this check needs a finite space")
    family = _load_family(cover_path, space)
    try:
        l_val = lebesgue.lebesgue_relative(family).value
        d_val, _ = lebesgue.lebesgue_diam(family)
    except CoverlensError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    upper = l_val if l_val.is_infinite else l_val.scale(2)
    ok = l_val <= d_val <= upper
    doc = {"L": l_val.serialize(), "Ldiam": d_val.serialize(),
           "twoL": upper.serialize(), "passed": ok}
    _emit(doc, as_json, [f"{l_val} <= {d_val} <= {upper}  {'PASS' if ok else 'FAIL'}"])
    sys.exit(0 if ok else 1)


@check.command("transport")
@click.option("--instance", "inst_path", required=True, type=click.Path())
@click.option("--subset", "subset_path", required=True, type=click.Path())
@click.option("--cover", "cover_path", required=True, type=click.Path())
@click.option("--ambient-mode", type=click.Choice(["image", "codomain"]), default="image")
@click.option("--json", "as_json", is_flag=True)
def check_transport(inst_path, subset_path, cover_path, ambient_mode, as_json):
    """The transport inequalities for a quasi-homothety instance."""
    try:
        inst = homothety.instance_from_json(_load_json(inst_path))
        subset = subset_from_json(_load_json(subset_path), inst.domain)
        family = covers.family_from_json(_load_json(cover_path), inst.codomain)
        report = homothety.transport_lemma_check(inst, subset, family, ambient_mode)
    except (CoverlensError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    doc = _transport_doc(report)
    _emit(doc, as_json, _transport_lines(report))
    sys.exit(0 if report.passed else 1)


def _transport_doc(report) -> dict:
    return {
        "ambient_mode": report.ambient_mode,
        "lambda_sq": str(report.lambda_sq),
        "R_sq": str(report.R_sq),
        "mesh_domain": report.mesh_domain.serialize(),
        "mesh_codomain": report.mesh_codomain.serialize(),
        "leb_domain": report.leb_domain.serialize(),
        "leb_codomain": report.leb_codomain.serialize(),
        "inequalities": {name: ok for name, ok in report.inequalities},
        "passed": report.passed,
    }


def _transport_lines(report) -> list[str]:
    lines = [
        f"ambient mode: {report.ambient_mode}",
        f"mesh(U) = {report.mesh_domain}, mesh(Ũ) = {report.mesh_codomain}",
        f"L(U,V) = {report.leb_domain}, L(Ũ,hV) = {report.leb_codomain}",
    ]
    lines += [f"  {'PASS' if ok else 'FAIL'}  {name}" for name, ok in report.inequalities]
    return lines


# ============================================================
# reproduce
# ============================================================

REPRODUCE_IDS = ("discrete", "box-chain", "counterexample-44", "corrected-44",
                 "interval-tail", "ball-tail")


def _rows_discrete():
    space = fixtures.discrete_space(5)
    fam = fixtures.singleton_cover(space)
    return [
        ("mesh", "0", covers.mesh(fam).serialize()),
        ("L", "1", lebesgue.lebesgue_relative(fam).value.serialize()),
        ("L_rad", "1", lebesgue.lebesgue_rad(fam).value.serialize()),
        ("L_diam", "1", lebesgue.lebesgue_diam(fam)[0].serialize()),
        ("L~", "0", lebesgue.second_kind_relative(fam).value.serialize()),
    ]


def _rows_box_chain():
    rows = []
    for name, ambient, expected in [
        ("L_A(U|A,A)", fixtures.BOX_CHAIN_SQUARE, "3/8"),
        ("L_B(U|B,A)", fixtures.BOX_CHAIN_PLANE, "1/4"),
        ("L_X(U,A)", fixtures.BOX_CHAIN_AMBIENT, "1/8"),
    ]:
        fam = fixtures.box_chain_family(ambient)
        value = boxlab.box_lebesgue_relative(ambient, fam, fixtures.BOX_CHAIN_SUBSET).value
        rows.append((name, expected, value.serialize()))
    return rows


def _rows_transport(mode: str):
    fx = fixtures.plane_embedding_fixture()
    report = homothety.transport_lemma_check(fx.instance, fx.subset, fx.family, mode)
    if mode == "codomain":
        expected_flags = {
            "(R/λ)·mesh(U) <= mesh(Ũ)": True,
            "mesh(Ũ) <= λR·mesh(U)": False,
            "(R/λ)·L(U,V) <= L(Ũ,hV)": False,
            "L(Ũ,hV) <= λR·L(U,V)": True,
        }
        rows = [
            ("L(U,V)", "1/4", report.leb_domain.serialize()),
            ("L(Ũ,hV) in the full codomain", "1/8", report.leb_codomain.serialize()),
            ("mesh(U)^2", "13/4", str(report.mesh_domain.radicand)),
            ("mesh(Ũ)^2", "53/16", str(report.mesh_codomain.radicand)),
        ]
    else:
        expected_flags = {name: True for name, _ in report.inequalities}
        rows = [
            ("L(U,V)", "1/4", report.leb_domain.serialize()),
            ("L(Ũ,hV) in the image", "1/4", report.leb_codomain.serialize()),
            ("mesh(U)", "sqrt(13/4)", report.mesh_domain.serialize()),
            ("mesh(Ũ) in the image", "sqrt(13/4)", report.mesh_codomain.serialize()),
        ]
    for name, ok in report.inequalities:
        rows.append((name, "PASS" if expected_flags[name] else "FAIL",
                     "PASS" if ok else "FAIL"))
    return rows


def _rows_interval_tail():
    rows = []
    previous = None
    for n in (4, 8, 16, 64):
        value = boxlab.truncated_family_lebesgue(n, "interval-tail")
        expected = F(1, 2) - F(1, n)
        rows.append((f"value at n = {n}", str(expected), value.serialize()))
        if previous is not None:
            rows.append((f"strictly above n = {n // 2}", "True", str(previous < value)))
        previous = value
    return rows


def _rows_ball_tail():
    n = 4
    fx = boxlab.build_truncated_scenario("ball-tail", n)
    fam = CoveringFamily.over_slice(fx.slice, list(zip(fx.names, fx.boxes)))
    level = 1 - F(3, 2 * n)
    value = boxlab.box_lebesgue_relative(fx.slice, fam, fx.default_subset).value
    rows = [("value at n = 4", str(level), value.serialize())]
    for r in (F(1, 4), F(1, 2), level - F(1, 64)):
        ok, _ = boxlab.box_ball_refinement(fx.slice, fam, fx.default_subset, r)
        rows.append((f"balls of radius {r} fit", "True", str(ok)))
    ok, _ = boxlab.box_ball_refinement(fx.slice, fam, fx.default_subset, level)
    rows.append((f"balls of radius {level} fit", "False", str(ok)))
    return rows


@main.command()
@click.argument("example", type=click.Choice(REPRODUCE_IDS))
@click.option("--json", "as_json", is_flag=True)
def reproduce(example: str, as_json: bool):
    """Recompute an embedded worked example and diff against its expected values."""
    rows = {
        "discrete": _rows_discrete,
        "box-chain": _rows_box_chain,
        "counterexample-44": lambda: _rows_transport("codomain"),
        "corrected-44": lambda: _rows_transport("image"),
        "interval-tail": _rows_interval_tail,
        "ball-tail": _rows_ball_tail,
    }[example]()
    ok = all(expected == got for _, expected, got in rows)
    doc = {
        "example": example,
        "rows": [{"quantity": q, "expected": e, "got": g} for q, e, g in rows],
        "passed": ok,
    }
    width = max(len(q) for q, _, _ in rows)
    lines = [
        f"{'ok ' if e == g else 'DIFF'} {q.ljust(width)}  expected {e}  got {g}"
        for q, e, g in rows
    ]
    lines.append("reproduced" if ok else "MISMATCH")
    _emit(doc, as_json, lines)
    sys.exit(0 if ok else 1)


# ============================================================
# fuzz
# ============================================================


@main.command()
@click.option("--trials", type=int, default=200)
@click.option("--seed", type=int, default=0)
@click.option("--kinds", default="finite,box,homothety")
@click.option("--results-dir", default=None,
              help="reproducer output directory (defaults to $COVERLENS_RESULTS_DIR)")
@click.option("--json", "as_json", is_flag=True)
def fuzz(trials, seed, kinds, results_dir, as_json):
    """Run the seeded invariant suite; exit 0 iff no assert-level violations."""
    kind_tuple = tuple(k.strip() for k in kinds.split(",") if k.strip())
    cfg = oracles.FuzzConfig(seed=seed, trials=trials, kinds=kind_tuple)
    report = oracles.fuzz_suite(cfg, results_dir=results_dir)
    doc = {
        "trials": report.trials_run,
        "violations": [
            {"invariant": v.invariant, "trial": v.trial, "detail": v.detail}
            for v in report.violations
        ],
        "findings": [
            {"invariant": v.invariant, "trial": v.trial, "detail": v.detail}
            for v in report.findings
        ],
        "ok": report.ok,
    }
    lines = [f"{report.trials_run} trials, {len(report.violations)} violations, "
             f"{len(report.findings)} findings"]
    lines += [f"  VIOLATION {v.invariant} (trial {v.trial}): {v.detail}"
              for v in report.violations]
    lines += [f"  finding {v.invariant} (trial {v.trial}): {v.detail}"
              for v in report.findings[:5]]
    _emit(doc, as_json, lines)
    sys.exit(0 if report.ok else 1)


if __name__ == "__main__":
    main()
