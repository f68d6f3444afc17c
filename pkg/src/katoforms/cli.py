"""Batch command-line front-end.

Every invocation builds a JobSpec, runs it, and emits one JSON report with
echoed inputs.  Exit codes: 0 verified/true, 1 refuted/false,
2 inconclusive-within-bounds, 3 input error.  Reports are deterministic for
a fixed job and seed; the environment variable KATOFORMS_SEED overrides the
default seed used by randomized sections of ``selftest``.

Mathematical objects cross the boundary as S-expressions (see ``sexpr``);
forms may also be written in infix notation such as ``x dx`` or ``dX^dY``.
An argument of the shape ``@path`` is read from the file at ``path``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from . import sexpr
from .certificates import (
    exponent_reduction,
    monomial_split_certificate,
    power_certificate,
    verify_certificate,
)
from .errors import KatoformsError, NotClosed
from .extensions import (
    AdaptedData,
    build_adapted,
    extension_from_json,
    extension_to_json,
    nu_kernel_member,
    omega_kernel_member,
    restrict,
    square_class_kernel,
    square_class_kernel_oracle,
)
from .fields import (
    FunctionField,
    frobenius_compose,
    frobenius_decompose,
    partial,
    pth_root,
    random_ratfunc,
)
from .forms import (
    DiffForm,
    cartier,
    cartier_raw,
    d,
    dlog,
    is_exact,
    nu_member,
    random_form_rng,
    sp,
    wedge,
)
from .generators import (
    GeneratorSpec,
    KIND_LINEAR,
    KIND_POWER,
    kernel_generators,
    make_instance,
    vanish_certificate,
)
from .kernels import IMPL_NAME
from .oracle import SearchBounds, exhaustive_exactness, solve_wp_plus_d
from .witt import (
    PfisterSymbol,
    arf,
    bilinear_kernel_generators,
    hyperbolicity_certificate,
    kato_e,
    kato_f,
    quad_kernel_generators,
)

REPORT_FORMAT = "katoforms-report-1"
DEFAULT_SEED = 20240803


@dataclass(frozen=True)
class JobSpec:
    """One validated CLI job: command name, options, seed."""

    command: str
    options: dict
    seed: int = DEFAULT_SEED

    def to_json(self) -> str:
        return json.dumps(
            {"command": self.command, "options": self.options, "seed": self.seed},
            sort_keys=True,
        )


def _read_arg(value: str) -> str:
    if value.startswith("@"):
        with open(value[1:], "r", encoding="utf-8") as fh:
            return fh.read().strip()
    return value


def _load_field(options: dict) -> FunctionField:
    text = options.get("field")
    if not text:
        raise KatoformsError("missing --field")
    text = _read_arg(text)
    if text.lstrip().startswith("(field"):
        return sexpr.parse_field(text)
    return sexpr.parse_field_text(text)


def _load_form(text: str, fld: FunctionField) -> DiffForm:
    return sexpr.parse_form_text(_read_arg(text), fld)


def _load_ext(options: dict):
    path = options.get("ext")
    if not path:
        raise KatoformsError("missing --ext")
    with open(path, "r", encoding="utf-8") as fh:
        return extension_from_json(fh.read())


def _parse_data(text: str, fld: FunctionField) -> AdaptedData:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, m = chunk.partition(":")
        pairs.append((fld.basis.index(name.strip()), int(m)))
    return AdaptedData(tuple(pairs))


def _parse_bounds(options: dict, fld: FunctionField) -> SearchBounds:
    deg = int(options.get("deg", 6))
    dens_text = options.get("dens", "1")
    dens = []
    for chunk in dens_text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        f = sexpr.parse_form_text(chunk, fld).scalar_value()
        if not f.is_poly():
            raise KatoformsError(f"denominator {chunk!r} must be a polynomial")
        dens.append(f.num)
    return SearchBounds(deg, tuple(dens))


def _bounds_doc(bounds: SearchBounds) -> dict:
    return {
        "max_degree": bounds.max_degree,
        "denominators": [repr(dn) for dn in bounds.denominators] or ["1"],
    }


# -- command handlers ---------------------------------------------------------


def _cmd_classify(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    omega = _load_form(options["form"], fld)
    closed = d(omega).is_zero()
    result: dict = {
        "closed": closed,
        "exact": is_exact(omega),
        "nu": nu_member(omega),
    }
    bounds = _parse_bounds(options, fld)
    cert = solve_wp_plus_d(omega, bounds)
    result["witness_bounds"] = _bounds_doc(bounds)
    if cert is not None:
        result["class_witness"] = "found"
        result["certificate"] = sexpr.print_certificate(cert)
        return 0, result
    result["class_witness"] = "absent-within-bounds"
    return 2, result


def _cmd_cartier(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    omega = _load_form(options["form"], fld)
    if options.get("raw"):
        image = cartier_raw(omega)
    else:
        image = cartier(omega)
    return 0, {"cartier": sexpr.print_form(image)}


def _cmd_restrict(options: dict, seed: int) -> tuple[int, dict]:
    ext = _load_ext(options)
    omega = _load_form(options["form"], ext.source)
    image = restrict(omega, ext)
    result = {
        "restricted": sexpr.print_form(image),
        "vanishes": image.is_zero(),
    }
    if options.get("data"):
        data = _parse_data(options["data"], ext.source)
        result["syntactic_kernel_member"] = omega_kernel_member(omega, data)
    elif ext.adapted is not None:
        result["syntactic_kernel_member"] = omega_kernel_member(omega, ext.adapted)
    return 0, result


def _cmd_kernel_test(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    omega = _load_form(options["form"], fld)
    data = _parse_data(options["data"], fld)
    if options.get("nu"):
        member = nu_kernel_member(omega, data)
        kind = "nu-kernel"
    else:
        member = omega_kernel_member(omega, data)
        kind = "omega-kernel"
    return (0 if member else 1), {"test": kind, "member": member}


def _cmd_kf_gens(options: dict, seed: int) -> tuple[int, dict]:
    ext = _load_ext(options)
    if ext.adapted is None:
        raise KatoformsError("generator enumeration needs an adapted extension spec")
    fld = ext.source
    n = int(options["n"])
    inst_text = _read_arg(options["inst"])
    insts = [
        sexpr.parse_form_text(line, fld)
        for line in inst_text.splitlines()
        if line.strip()
    ]
    pairs = tuple((fld.var(i), m) for i, m in ext.adapted.pairs)
    gens = kernel_generators(fld, pairs, n, insts)
    out = []
    for g in gens:
        entry = {
            "kind": g.spec.kind,
            "trivial": g.trivial,
            "value": sexpr.print_form(g.value),
        }
        if g.spec.kind == KIND_LINEAR:
            entry["j"] = g.spec.j
        else:
            entry["t"] = g.spec.t
            entry["k"] = list(g.spec.k)
        out.append(entry)
    return 0, {"count": len(out), "generators": out}


def _cmd_verify_cert(options: dict, seed: int) -> tuple[int, dict]:
    cert = sexpr.parse_certificate(_read_arg(options["cert"]))
    fld = cert.field
    lhs = _load_form(options["lhs"], fld)
    rhs = _load_form(options["rhs"], fld)
    ok = verify_certificate(lhs, rhs, cert)
    return (0 if ok else 1), {"verified": ok}


def _cmd_vanish_cert(options: dict, seed: int) -> tuple[int, dict]:
    ext = _load_ext(options)
    if ext.adapted is None:
        raise KatoformsError("vanishing certificates need an adapted extension spec")
    fld = ext.source
    n = int(options["n"])
    inst = _load_form(options["inst"], fld)
    pairs = tuple((fld.var(i), m) for i, m in ext.adapted.pairs)
    kind = options.get("kind", "power")
    if kind == "linear":
        spec = GeneratorSpec(KIND_LINEAR, pairs, n, j=int(options["j"]))
    else:
        k = tuple(int(c) for c in options["k"].split(","))
        spec = GeneratorSpec(KIND_POWER, pairs, n, t=int(options["t"]), k=k)
    g = make_instance(spec, inst)
    cert = vanish_certificate(g, ext)
    return 0, {
        "value": sexpr.print_form(g.value),
        "restricted": sexpr.print_form(restrict(g.value, ext)),
        "certificate": sexpr.print_certificate(cert),
        "verified": True,
    }


def _cmd_witt_gens(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    data = _parse_data(options["data"], fld)
    pairs = tuple((fld.var(i), m) for i, m in data.pairs)
    s_list = [
        sexpr.parse_form_text(chunk.strip(), fld).scalar_value()
        for chunk in options["s"].split(",")
        if chunk.strip()
    ]
    gens = quad_kernel_generators(pairs, s_list)
    out = []
    for g in gens:
        entry = {
            "kind": g.kind,
            "s": sexpr.print_ratfunc(g.s),
            "tail": sexpr.print_ratfunc(g.tail),
            "form": sexpr.print_quadform(g.form),
        }
        if g.kind == "linear":
            entry["j"] = g.j
        else:
            entry["t"] = g.t
            entry["k"] = list(g.k)
        out.append(entry)
    return 0, {"count": len(out), "generators": out}


def _cmd_check_hyperbolic(options: dict, seed: int) -> tuple[int, dict]:
    ext = _load_ext(options)
    if ext.adapted is None:
        raise KatoformsError("hyperbolicity checks need an adapted extension spec")
    fld = ext.source
    s = sexpr.parse_form_text(_read_arg(options["s"]), fld).scalar_value()
    pairs = tuple((fld.var(i), m) for i, m in ext.adapted.pairs)
    candidates = quad_kernel_generators(pairs, [s])
    if options.get("j") is not None:
        wanted = [g for g in candidates if g.kind == "linear" and g.j == int(options["j"])]
    elif options.get("t") is not None:
        k = tuple(int(c) for c in options["k"].split(","))
        wanted = [
            g for g in candidates
            if g.kind == "power" and g.t == int(options["t"]) and g.k == k
        ]
    else:
        raise KatoformsError("give either --j or --t/--k to pick the generator")
    if not wanted:
        raise KatoformsError("no generator matches the requested pattern")
    g = wanted[0]
    if options.get("form"):
        supplied = sexpr.parse_quadform(_read_arg(options["form"]), fld)
        if supplied != g.form:
            raise KatoformsError("supplied form does not match the requested generator")
    chain = hyperbolicity_certificate(g, ext)
    steps = []
    for lhs, rhs, cert in chain.steps:
        steps.append(
            {
                "from": sexpr.print_quadform(lhs),
                "to": sexpr.print_quadform(rhs),
                "matrix": [[sexpr.print_ratfunc(e) for e in row] for row in cert.matrix],
            }
        )
    return 0, {
        "form": sexpr.print_quadform(g.form),
        "restricted": sexpr.print_quadform(chain.restricted),
        "steps": steps,
        "final": sexpr.print_quadform(chain.final_form),
        "lagrangian": [
            [sexpr.print_ratfunc(e) for e in v] for v in chain.lagrangian.basis
        ],
        "verified": True,
    }


def _cmd_arf(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    q = sexpr.parse_quadform(_read_arg(options["form"]), fld)
    rep = arf(q)
    result = {"arf": sexpr.print_ratfunc(rep)}
    if options.get("check_trivial"):
        bounds = _parse_bounds(options, fld)
        result["bounds"] = _bounds_doc(bounds)
        cert = solve_wp_plus_d(DiffForm.scalar(fld, rep), bounds)
        if cert is not None:
            result["trivial"] = True
            return 0, result
        result["trivial"] = "inconclusive-within-bounds"
        return 2, result
    return 0, result


def _cmd_kato_map(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    slots = tuple(
        sexpr.parse_form_text(chunk.strip(), fld).scalar_value()
        for chunk in options.get("slots", "").split(",")
        if chunk.strip()
    )
    if options.get("tail"):
        tail = sexpr.parse_form_text(_read_arg(options["tail"]), fld).scalar_value()
        image = kato_f(PfisterSymbol(slots, tail))
        name = f"f_{len(slots)}"
    else:
        image = kato_e(PfisterSymbol(slots))
        name = f"e_{len(slots)}"
    return 0, {"map": name, "image": sexpr.print_form(image)}


def _cmd_oracle_solve(options: dict, seed: int) -> tuple[int, dict]:
    fld = _load_field(options)
    omega = _load_form(options["form"], fld)
    bounds = _parse_bounds(options, fld)
    result: dict = {"bounds": _bounds_doc(bounds)}
    cert = solve_wp_plus_d(omega, bounds)
    if cert is not None:
        result["witness"] = "found"
        result["certificate"] = sexpr.print_certificate(cert)
        return 0, result
    result["witness"] = "absent-within-bounds"
    return 2, result


def _cmd_validate_ext(options: dict, seed: int) -> tuple[int, dict]:
    ext = _load_ext(options)
    return 0, {"normalized": json.loads(extension_to_json(ext))}


# -- selftest -------------------------------------------------------------------


def _section_fields(rng: random.Random) -> None:
    for p, m in [(2, 1), (2, 2), (3, 2)]:
        fld = FunctionField.make(p, [f"x{i+1}" for i in range(m)])
        pool = [fld.const_poly(1), fld.var_poly(0)]
        for _ in range(40):
            f = random_ratfunc(fld, rng, 3, 3, pool)
            assert frobenius_compose(fld, frobenius_decompose(f)) == f
            g = random_ratfunc(fld, rng, 2, 2)
            assert pth_root(g**p) == g
            h = random_ratfunc(fld, rng, 2, 2)
            i = rng.randrange(m)
            lhs = partial(f * h, i)
            assert lhs == f * partial(h, i) + h * partial(f, i)


def _section_forms(rng: random.Random) -> None:
    for p, m in [(2, 2), (3, 2)]:
        fld = FunctionField.make(p, [f"x{i+1}" for i in range(m)])
        for _ in range(40):
            n = rng.randint(0, 2)
            w = random_form_rng(fld, n, 3, 2, rng)
            assert d(d(w)).is_zero()
            assert cartier_raw(sp(w)) == w
            if n < m:
                assert cartier_raw(d(w)).is_zero()
            rhs, cert = power_certificate(w, rng.randint(0, 3))
            assert verify_certificate(rhs, w, cert)
        a = random_ratfunc(fld, rng, 2, 2, nonzero=True)
        b = random_ratfunc(fld, rng, 2, 2, nonzero=True)
        assert nu_member(wedge(dlog(a), dlog(b)))


def _section_certificates(rng: random.Random) -> None:
    for p in (2, 3):
        fld = FunctionField.make(p, ["x", "y"])
        pool = [fld.var(0), fld.var(1), fld.var(0) + fld.var(1)]
        for _ in range(25):
            r = rng.randint(1, 2)
            bs = [rng.choice(pool) for _ in range(r)]
            ks = [rng.randint(1, 4) for _ in range(r)]
            v = random_form_rng(fld, rng.randint(0, 1), 2, 2, rng)
            rhs, cert = monomial_split_certificate(bs, ks, v)
            lhs = d(v)
            for bb, kk in zip(bs, ks):
                lhs = lhs.scale(bb**kk)
            assert verify_certificate(lhs, rhs, cert)
            t = rng.randint(1, 2)
            red = exponent_reduction(bs, [k + p for k in ks], t, v)
            assert verify_certificate(red.lhs_value(), red.rhs_value(), red.certificate)


def _section_oracle(rng: random.Random) -> None:
    for p in (2, 3):
        fld = FunctionField.make(p, ["x"])
        xv = fld.var(0)
        pool = [fld.const_poly(1), xv.num]
        bounds = SearchBounds(8, (fld.const_poly(1), xv.num, (xv * xv).num))
        for _ in range(12):
            w = random_form_rng(fld, 1, 5, 2, rng, den_pool=pool)
            assert is_exact(w) == exhaustive_exactness(w, bounds)


def _section_extensions(rng: random.Random) -> None:
    fld = FunctionField.make(2, ["x", "y", "z"])
    data = AdaptedData(((0, 2), (1, 1)))
    ext = build_adapted(fld, data)
    for _ in range(40):
        n = rng.randint(0, 2)
        w = random_form_rng(fld, n, 2, 2, rng)
        assert omega_kernel_member(w, data) == restrict(w, ext).is_zero()
        if n <= 1:
            assert restrict(d(w), ext) == d(restrict(w, ext))
    for _ in range(20):
        f = random_ratfunc(fld, rng, 3, 3)
        assert square_class_kernel(f, data) == square_class_kernel_oracle(f, ext)


def _section_witt(rng: random.Random) -> None:
    fld = FunctionField.make(2, ["x", "y"])
    x, y = fld.var(0), fld.var(1)
    ext = build_adapted(fld, AdaptedData(((0, 2),)))
    for s in [y, x + y, fld.one()]:
        for g in quad_kernel_generators(((x, 2),), [s]):
            assert hyperbolicity_certificate(g, ext).verify()
    ext1 = build_adapted(fld, AdaptedData(((0, 1),)))
    bilinear_kernel_generators(ext1, [x, x * y * y, fld.one()])


_SELFTEST_SECTIONS: dict[str, Callable[[random.Random], None]] = {
    "fields": _section_fields,
    "forms": _section_forms,
    "certificates": _section_certificates,
    "oracle": _section_oracle,
    "extensions": _section_extensions,
    "witt": _section_witt,
}


def _cmd_selftest(options: dict, seed: int) -> tuple[int, dict]:
    wanted = None
    if options.get("sections"):
        wanted = {s.strip() for s in options["sections"].split(",") if s.strip()}
    rows = []
    failed = False
    for name, fn in _SELFTEST_SECTIONS.items():
        if wanted is not None and name not in wanted:
            rows.append({"section": name, "status": "skipped"})
            continue
        try:
            fn(random.Random(seed))
            rows.append({"section": name, "status": "pass"})
        except AssertionError as exc:
            rows.append({"section": name, "status": "fail", "detail": str(exc)})
            failed = True
    return (1 if failed else 0), {
        "kernels": IMPL_NAME,
        "seed": seed,
        "sections": rows,
    }


_HANDLERS: dict[str, Callable[[dict, int], tuple[int, dict]]] = {
    "classify": _cmd_classify,
    "cartier": _cmd_cartier,
    "restrict": _cmd_restrict,
    "kernel-test": _cmd_kernel_test,
    "kf-gens": _cmd_kf_gens,
    "verify-cert": _cmd_verify_cert,
    "vanish-cert": _cmd_vanish_cert,
    "witt-gens": _cmd_witt_gens,
    "check-hyperbolic": _cmd_check_hyperbolic,
    "arf": _cmd_arf,
    "kato-map": _cmd_kato_map,
    "oracle-solve": _cmd_oracle_solve,
    "validate-ext": _cmd_validate_ext,
    "selftest": _cmd_selftest,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit status, report document)."""
    report = {
        "format": REPORT_FORMAT,
        "command": job.command,
        "inputs": job.options,
        "seed": job.seed,
    }
    handler = _HANDLERS.get(job.command)
    if handler is None:
        report["error"] = f"unknown command {job.command!r}"
        return 3, report
    try:
        code, result = handler(job.options, job.seed)
    except (KatoformsError, NotClosed, FileNotFoundError, KeyError, ValueError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        return 3, report
    report["result"] = result
    return code, report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="katoforms",
        description="exact differential-form and quadratic-form calculus "
        "over rational function fields of positive characteristic",
    )
    parser.add_argument("--out", help="write the JSON report to this file")
    parser.add_argument("--job", help="run a JobSpec from a JSON file")
    sub = parser.add_subparsers(dest="command")

    def add(name: str, *args: tuple) -> None:
        sp_ = sub.add_parser(name)
        # accepted after the subcommand too; SUPPRESS keeps a top-level value
        sp_.add_argument(
            "--out", default=argparse.SUPPRESS, help="write the JSON report here"
        )
        for flags, kwargs in args:
            sp_.add_argument(*flags, **kwargs)

    form_arg = (("--form",), {"required": True})
    field_arg = (("--field",), {"required": True})
    bounds_args = [
        (("--deg",), {"type": int, "default": 6}),
        (("--dens",), {"default": "1"}),
    ]
    add("classify", form_arg, field_arg, *bounds_args)
    add("cartier", form_arg, field_arg, (("--raw",), {"action": "store_true"}))
    add(
        "restrict",
        form_arg,
        (("--ext",), {"required": True}),
        (("--data",), {"default": None}),
    )
    add(
        "kernel-test",
        form_arg,
        field_arg,
        (("--data",), {"required": True}),
        (("--nu",), {"action": "store_true"}),
    )
    add(
        "kf-gens",
        (("--spec", "--ext"), {"dest": "ext", "required": True}),
        (("--n",), {"required": True, "type": int}),
        (("--inst",), {"required": True}),
    )
    add(
        "verify-cert",
        (("--lhs",), {"required": True}),
        (("--rhs",), {"required": True}),
        (("--cert",), {"required": True}),
    )
    add(
        "vanish-cert",
        (("--spec", "--ext"), {"dest": "ext", "required": True}),
        (("--n",), {"required": True, "type": int}),
        (("--inst",), {"required": True}),
        (("--kind",), {"choices": ["linear", "power"], "default": "power"}),
        (("--j",), {"type": int, "default": None}),
        (("--t",), {"type": int, "default": None}),
        (("--k",), {"default": None}),
    )
    add(
        "witt-gens",
        field_arg,
        (("--data",), {"required": True}),
        (("--s",), {"required": True}),
    )
    add(
        "check-hyperbolic",
        (("--form",), {"default": None}),
        (("--ext",), {"required": True}),
        (("--s",), {"required": True}),
        (("--j",), {"type": int, "default": None}),
        (("--t",), {"type": int, "default": None}),
        (("--k",), {"default": None}),
    )
    add(
        "arf",
        form_arg,
        field_arg,
        (("--check-trivial",), {"dest": "check_trivial", "action": "store_true"}),
        *bounds_args,
    )
    add(
        "kato-map",
        field_arg,
        (("--slots",), {"default": ""}),
        (("--tail",), {"default": None}),
    )
    add("oracle-solve", form_arg, field_arg, *bounds_args)
    add("validate-ext", (("--ext",), {"required": True}))
    add("selftest", (("--sections",), {"default": None}))
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    seed = int(os.environ.get("KATOFORMS_SEED", DEFAULT_SEED))
    if ns.job:
        try:
            with open(ns.job, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(json.dumps({"format": REPORT_FORMAT, "error": str(exc)}, indent=2))
            return 3
        if (
            not isinstance(doc, dict)
            or not isinstance(doc.get("command"), str)
            or not isinstance(doc.get("options", {}), dict)
            or not isinstance(doc.get("seed", 0), int)
        ):
            print(
                json.dumps(
                    {"format": REPORT_FORMAT, "error": "malformed job document"},
                    indent=2,
                )
            )
            return 3
        job = JobSpec(
            command=doc["command"],
            options=doc.get("options", {}),
            seed=int(doc.get("seed", seed)),
        )
    elif ns.command:
        options = {
            k: v
            for k, v in vars(ns).items()
            if k not in ("command", "out", "job") and v not in (None, False)
        }
        job = JobSpec(command=ns.command, options=options, seed=seed)
    else:
        parser.print_help()
        return 3
    code, report = run(job)
    text = json.dumps(report, indent=2, sort_keys=True)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
