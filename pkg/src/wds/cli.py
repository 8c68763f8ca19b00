"""Batch front-end: build a configuration, run verifications, emit results.

Exit status 0 means every requested verification passed; usage errors from
invalid flag combinations exit with status 2.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

from . import linalg
from .diffpoly import DiffPoly
from .lie import (GradedSetup, MINIMAL, SHORT, build_sl, build_sp)
from .pva import ReductionFrame, check_pva_axioms
from .walgebra import WGenerators, verify_table
from .hierarchy import (conserved_densities, dressing_defect,
                        hierarchy_equation, reduce_mod_jk, solve_dressing,
                        verify_lenard_magri)


class UsageError(SystemExit):
    def __init__(self, msg: str):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def build_algebra(name: str, params: list[str], form_scale: str | None):
    kind, n = name[:2], name[2:]
    if kind == "sl" and n.isdigit():
        return build_sl(int(n), params, form_scale)
    if kind == "sp" and n.isdigit():
        return build_sp(int(n), params)
    raise UsageError(f"unknown algebra {name!r}; use slN or spN")


def default_nilpotent(g, name: str, kind: str):
    """Deterministic representative: lowest-root vector, or the half-rank
    block for a short element."""
    n = int(name[2:])
    if kind == MINIMAL:
        if name.startswith("sl"):
            return g.parse({f"E{n}1": 1})
        return g.parse({"C11": 1})
    if not name.startswith("sl") or n % 2:
        raise UsageError(f"no short nilpotent constructor for {name}")
    m = n // 2
    return g.parse({f"E{m + i}{i}": 1 for i in range(1, m + 1)})


def find_isotropic_s(setup: GradedSetup):
    """First embeddable element over small integer coefficient patterns."""
    g = setup.algebra
    half = setup.eig_indices(Fraction(1, 2))
    for coeffs in itertools.product((1, 0, -1), repeat=len(half)):
        if not any(coeffs):
            continue
        s = g.zero_vec()
        for c, i in zip(coeffs, half):
            if c:
                s = linalg.vec_add(
                    s, linalg.vec_scale(setup.basis[i], g.ring.const(c)))
        if setup.find_embeddable(s) is not None:
            return s
    raise UsageError(
        "no embeddable element exists in g_1/2 for this algebra "
        "(small-coefficient search exhausted; e.g. sp4 minimal admits none)")


def parse_s(setup: GradedSetup, choice: str):
    g = setup.algebra
    if choice == "e":
        return setup.e, False
    if choice == "isotropic":
        if setup.kind != MINIMAL:
            raise UsageError("isotropic s requires a minimal nilpotent")
        return find_isotropic_s(setup), True
    if choice.startswith("diag:"):
        if setup.kind != SHORT:
            raise UsageError("diag s requires a short nilpotent")
        entries = choice[5:].split(",")
        m = len(entries)
        s = g.zero_vec()
        for i, ent in enumerate(entries):
            try:
                c = g.ring.const(Fraction(ent))
            except ValueError:
                c = g.ring.param(ent)
            vec = g.parse({f"E{i + 1}{m + i + 1}": 1})
            s = linalg.vec_add(s, linalg.vec_scale(vec, c))
        return s, False
    if choice.startswith("explicit:"):
        terms = {}
        for part in choice[9:].split(","):
            if "*" in part:
                co, lab = part.split("*")
                terms[lab] = Fraction(co)
            else:
                terms[part] = 1
        return g.parse(terms), False
    raise UsageError(f"unknown s choice {choice!r}")


def parse_a_choice(setup, frame, choice: str, emb_s_star=None):
    g = setup.algebra
    if choice == "f_plus_ze":
        return {0: setup.f, 1: frame.s}
    if choice == "e_plus_s_star":
        if emb_s_star is None:
            raise UsageError("e_plus_s_star needs an embeddable isotropic s")
        return {0: setup.e, -1: emb_s_star}
    if choice.startswith("center"):
        # central element of g_0^f (or of g_0^s for the isotropic variant)
        base = [setup.basis[i] for i in setup.g0f_indices]
        if frame.isotropic:
            base = [
                v for v in base
                if not any(g.bracket(v, frame.s))
            ]
        rows = [[x for v2 in base for x in g.bracket(v1, v2)] for v1 in base]
        ker = linalg.kernel(linalg.transpose(rows), g.ring, len(base)) \
            if base else []
        if not ker:
            raise UsageError("the centralizer core is trivial; no center element")
        c = g.zero_vec()
        for co, v in zip(ker[0], base):
            c = linalg.vec_add(c, linalg.vec_scale(v, co))
        return {0: c}
    raise UsageError(f"unknown a(z) choice {choice!r}")


def make_frame(args):
    params, scale = [], None
    if args.s.startswith("diag:"):
        for ent in args.s[5:].split(","):
            try:
                Fraction(ent)
            except ValueError:
                params.append(ent)
        if params and args.form_scale is None:
            scale = "c"
    if args.form_scale:
        scale = args.form_scale
    g = build_algebra(args.algebra, params, scale)
    kind = MINIMAL if args.nilpotent == "minimal" else SHORT
    if args.f:
        f = g.parse({p: 1 for p in args.f.split(",")})
    else:
        f = default_nilpotent(g, args.algebra, kind)
    setup = GradedSetup(g, f, kind)
    s, isotropic = parse_s(setup, args.s)
    frame = ReductionFrame(setup, s, isotropic=isotropic)
    return g, setup, frame


def emit(doc, args):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        def walk(d, indent=0):
            for k, v in d.items():
                if isinstance(v, dict):
                    print(" " * indent + f"{k}:")
                    walk(v, indent + 2)
                else:
                    print(" " * indent + f"{k}: {v}")
        walk(doc)


def fmt_poly(p: DiffPoly, args) -> str:
    if args.format == "latex":
        return p.latex()
    if args.format == "json":
        return p.to_json()
    return str(p)


def cmd_setup(args):
    g, setup, frame = make_frame(args)
    doc = {"algebra": g.to_json() if args.dump_setup else {"dim": g.dim},
           "setup": setup.to_json(),
           "s": g.vec_str(frame.s)}
    emit(doc, args)
    return 0


def cmd_generators(args):
    g, setup, frame = make_frame(args)
    gens = WGenerators(frame)
    doc = {name: fmt_poly(p, args) for name, p in gens.all_generators()}
    doc["Ltilde"] = fmt_poly(gens.Ltilde, args)
    emit(doc, args)
    return 0


def table_names(frame) -> list[str]:
    if frame.isotropic:
        return ["isotropic_h_brackets", "isotropic_k_brackets"]
    if frame.setup.kind == MINIMAL:
        return ["minimal_generators"]
    return ["short_generators"]


def cmd_tables(args):
    g, setup, frame = make_frame(args)
    gens = WGenerators(frame)
    status = 0
    doc = {}
    for which in table_names(frame):
        per_entry: dict = {}
        bad = verify_table(frame, gens, which, report=per_entry)
        doc[which] = per_entry
        if bad:
            status = 1
    emit(doc, args)
    return status


def cmd_hierarchy(args):
    g, setup, frame = make_frame(args)
    gens = WGenerators(frame)
    max_deg = Fraction(args.max_degree)
    U, h, dec = solve_dressing(frame, max_deg, projected=True)
    emb_star = None
    if frame.isotropic:
        emb_star = setup.find_embeddable(frame.s)
    a_z = parse_a_choice(setup, frame, args.a_choice, emb_star)
    dens = conserved_densities(frame, h, a_z, n_max=args.n, dec=dec)
    doc = {}
    for n, gn in enumerate(dens):
        doc[f"int g_{n}"] = fmt_poly(gn, args)
    for n in range(min(args.n, len(dens) - 1) + 1):
        eqs = {}
        for name, w in gens.all_generators():
            eq = hierarchy_equation(frame, gens, dens[n], w)
            if args.reduce:
                eq = reduce_mod_jk(frame, eq)
            eqs[f"d/dt_{n} {name}"] = fmt_poly(eq, args)
        doc[f"time_index {n}"] = eqs
    emit(doc, args)
    return 0


def cmd_verify_all(args):
    g, setup, frame = make_frame(args)
    failures = []

    def report(name, bad):
        print(f"[{'PASS' if not bad else 'FAIL'}] {name}")
        if bad:
            failures.append((name, bad))

    report("lie algebra axioms", g.check_axioms())
    grading_ok = sum(len(v) for v in setup.grading.values()) == g.dim
    report("grading completeness", [] if grading_ok else ["dimension mismatch"])
    report("affine bracket PVA axioms",
           check_pva_axioms(frame.full_table, seed=args.seed, samples=8,
                            gens_cap=min(g.dim, 8)))
    gens = WGenerators(frame)
    memb = [name for name, p in gens.all_generators()
            if not frame.is_in_w(p)]
    report("generator membership", memb)
    for which in table_names(frame):
        report(f"bracket table {which}", verify_table(frame, gens, which))
    max_deg = Fraction(args.max_degree)
    U, h, dec = solve_dressing(frame, max_deg, projected=True)
    defect = dressing_defect(frame, U, h, max_deg)
    report("dressing conjugation oracle", [] if not defect else ["nonzero"])
    emb_star = setup.find_embeddable(frame.s) if frame.isotropic else None
    a_z = parse_a_choice(setup, frame, args.a_choice, emb_star)
    dens = conserved_densities(frame, h, a_z, n_max=args.n, dec=dec)
    report("lenard-magri recursion", verify_lenard_magri(frame, gens, dens))
    if failures:
        print(f"{len(failures)} verification group(s) failed")
        return 1
    print("all verifications passed")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wds",
        description="classical W-algebras and Drinfeld-Sokolov hierarchies, exactly",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("setup", cmd_setup),
        ("generators", cmd_generators),
        ("tables", cmd_tables),
        ("hierarchy", cmd_hierarchy),
        ("verify-all", cmd_verify_all),
    ):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--algebra", required=True, help="slN or spN")
        p.add_argument("--nilpotent", choices=("minimal", "short"),
                       default="minimal")
        p.add_argument("--f", default=None,
                       help="explicit nilpotent as comma-separated basis labels")
        p.add_argument("--s", default="e",
                       help="e | isotropic | diag:a,b | explicit:LABEL,...")
        p.add_argument("--a-choice", default="f_plus_ze",
                       help="f_plus_ze | e_plus_s_star | center")
        p.add_argument("--n", type=int, default=1,
                       help="highest hierarchy time index")
        p.add_argument("--max-degree", type=int,
                       default=int(os.environ.get("WDS_MAX_DEGREE", 4)))
        p.add_argument("--format", choices=("text", "latex", "json"),
                       default="text")
        p.add_argument("--seed", type=int, default=1729)
        p.add_argument("--reduce", action="store_true",
                       help="apply the J_K reduction to printed equations")
        p.add_argument("--dump-setup", action="store_true")
        p.add_argument("--form-scale", default=None,
                       help="scale the trace form by a named parameter")
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
