"""``relmon`` command line: law suites, Kan extensions from spec files, λ-terms.

Exit codes: 0 all checks pass or are skipped, 1 a law fails, 2 input error,
3 normalisation ran out of fuel.  JSON reports have sorted keys, carry
``"schema": "relmon/1"``, and never include timings; wall-clock goes to
stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .finset import DEFAULT_BUDGET, EnumerationOverflow, budget
from .report import FAIL, STATUSES, Report, jsonable
from .specfile import SCHEMA_VERSION, Spec, SpecError, check_spec, load_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FUEL = 0, 1, 2, 3
SUITE_NAMES = (
    "semiring", "vec", "lam", "state", "cont", "powerset", "kleisli", "em",
    "kan-coherence", "wellbehaved", "extend", "coreflection", "arrows", "roundtrips", "all",
)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def dump(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def emit(doc: dict, out: str | None) -> None:
    text = dump(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()


def default_budget() -> int:
    raw = os.environ.get("RELMON_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"RELMON_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("RELMON_BUDGET must be positive")
    return value


def summarize(rep: Report) -> dict:
    counts = {s: 0 for s in STATUSES}
    for c in rep.checks:
        counts[c.status] += 1
    return counts


def first_failure(rep: Report) -> dict | None:
    bad = sorted(rep.failures, key=lambda c: c.id)
    return bad[0].to_json() if bad else None


# ---------------------------------------------------------------- laws


def cmd_laws(args) -> int:
    from .suites import SuiteConfig, run_suite

    if args.suite is None and args.spec is None:
        raise InputError("laws needs --suite or --spec")
    if args.suite is not None and args.suite not in SUITE_NAMES:
        raise InputError(f"unknown suite {args.suite!r}; known: {', '.join(SUITE_NAMES)}")
    for flag in ("size_cap", "samples", "truncation"):
        if getattr(args, flag) < 0:
            raise InputError(f"--{flag.replace('_', '-')} must be non-negative")
    cfg = SuiteConfig(size_cap=args.size_cap, seed=args.seed, samples=args.samples, truncation=args.truncation)
    rep = Report()
    spec = load_spec(args.spec) if args.spec else None
    with budget(args.budget):
        if spec is not None:
            rep.extend(check_spec(spec))
        if args.suite is not None:
            rep.extend(run_suite(args.suite, cfg))
    doc = {
        "schema": SCHEMA_VERSION,
        "command": "laws",
        "suite": args.suite,
        "spec": args.spec,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "size_cap": cfg.size_cap,
        "truncation": cfg.truncation,
        "budget": args.budget,
        "status": "fail" if rep.failures else "pass",
        "summary": summarize(rep),
        "checks": rep.to_json(),
    }
    bad = first_failure(rep)
    if bad is not None:
        doc["first_failure"] = bad
    emit(doc, args.out)
    if bad is not None:
        print(f"law failure: {bad['id']}: {json.dumps(jsonable(bad.get('witness')), sort_keys=True, ensure_ascii=False)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------- kan


def _lan_size(spec: Spec, value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        c = spec.category
        for x in c.objects:
            if str(x) == value and c.sizes is not None:
                return c.sizes[x]
        raise InputError(f"--object must be a set size or an object of a subuniverse, got {value!r}") from None
    if n < 0:
        raise InputError("--object size must be non-negative")
    return n


def cmd_kan(args) -> int:
    from .kan import lan_object

    spec = load_spec(args.spec)
    for flag, name in (("--functor", args.functor), ("--along", args.along)):
        if name not in spec.functors and not (name == "inclusion" and spec.category.sizes is not None):
            raise InputError(f"{flag}: unknown functor {name!r}; spec defines {sorted(spec.functors)}")
    from .specfile import concrete_inclusion

    F = spec.functors.get(args.functor) or concrete_inclusion(spec.category, "/functors")
    J = spec.functors.get(args.along) or concrete_inclusion(spec.category, "/functors")
    n = _lan_size(spec, args.object)
    with budget(args.budget):
        pre = check_spec(spec, functors=sorted({args.functor, args.along} & set(spec.functors)), payloads=False)
        if pre.failures:
            bad = first_failure(pre)
            raise InputError(f"spec data fails its law check: {bad['id']}: {json.dumps(bad.get('witness'), sort_keys=True, ensure_ascii=False)}")
        lan = lan_object(J, F, n)
        reps = []
        for cls in range(lan.size):
            el = lan.rep(cls)
            reps.append({"class": cls, "object": el.z, "map": list(el.g.table), "element": el.x})
        iota = []
        for z in spec.category.objects:
            for p in range(n ** J.obj[z].size):
                iota.append({"object": z, "map": list(lan.g_fn(z, p).table), "table": list(lan.iota(z, p).table)})
    doc = {
        "schema": SCHEMA_VERSION,
        "command": "kan",
        "spec": args.spec,
        "functor": args.functor,
        "along": args.along,
        "size": n,
        "class_count": lan.size,
        "representatives": reps,
        "iota": iota,
    }
    emit(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- lam


def cmd_lam(args) -> int:
    from .instances.lam import Subst, lam_subst, normalize, parse, show

    def read(text: str, scope: int, what: str):
        try:
            return parse(text, scope)
        except ValueError as e:
            raise InputError(f"{what}: {e}") from None

    if args.scope < 0:
        raise InputError("--scope must be non-negative")
    term = read(args.term, args.scope, "term")
    if args.action == "nf":
        if args.fuel < 0:
            raise InputError("--fuel must be non-negative")
        res = normalize(term, args.scope, args.fuel)
        if res.exhausted:
            print(f"partial after {res.steps} steps: {show(res.term)}")
            print(f"fuel exhausted after {res.steps} steps", file=sys.stderr)
            return EXIT_FUEL
        print(show(res.term))
        return EXIT_OK
    entries = args.with_ or []
    if len(entries) != args.scope:
        raise InputError(f"subst needs one --with per variable in scope: got {len(entries)}, scope is {args.scope}")
    if args.tgt_scope is None or args.tgt_scope < 0:
        raise InputError("subst needs a non-negative --tgt-scope")
    images = tuple(read(e, args.tgt_scope, f"--with #{i}") for i, e in enumerate(entries))
    print(show(lam_subst(term, Subst(args.scope, args.tgt_scope, images))))
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relmon", description="Relative monads checked by brute force on finite data.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    laws = sub.add_parser("laws", help="run a law suite and print a JSON report")
    laws.add_argument("--suite", help=f"one of: {', '.join(SUITE_NAMES)}")
    laws.add_argument("--spec", help="also law-check the data embedded in a JSON spec file")
    laws.add_argument("--size-cap", type=int, default=2, help="largest object size in exhaustive suites (default 2)")
    laws.add_argument("--seed", type=int, default=0, help="seed for sampled checks and random functors (default 0)")
    laws.add_argument("--samples", type=int, default=1000, help="samples per sampled law (default 1000)")
    laws.add_argument("--budget", type=int, default=None, help="enumeration budget (default RELMON_BUDGET or 10^6)")
    laws.add_argument("--truncation", type=int, default=2, help="truncation k of the index category (default 2)")
    laws.add_argument("--out", help="write the report here instead of stdout")

    kan = sub.add_parser("kan", help="compute Lan_J F at a finite set from a JSON spec")
    kan.add_argument("--spec", required=True)
    kan.add_argument("--functor", required=True, help="name of F in the spec")
    kan.add_argument("--along", default="J", help="name of J in the spec (default J; 'inclusion' for a subuniverse)")
    kan.add_argument("--object", "--size", dest="object", required=True, help="size of X, or a subuniverse object")
    kan.add_argument("--budget", type=int, default=None)
    kan.add_argument("--out")

    lam = sub.add_parser("lam", help="normalise or substitute untyped λ-terms (de Bruijn indices)")
    lam.add_argument("action", choices=("nf", "subst"))
    lam.add_argument("term")
    lam.add_argument("--scope", type=int, default=0, help="number of free variables of the term")
    lam.add_argument("--fuel", type=int, default=100, help="β-steps allowed for nf (default 100)")
    lam.add_argument("--with", dest="with_", action="append", help="image of the next variable (subst; repeatable)")
    lam.add_argument("--tgt-scope", type=int, help="scope of the substituted terms (subst)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        if getattr(args, "budget", 0) is None:
            args.budget = default_budget()
        elif getattr(args, "budget", 1) <= 0:
            raise InputError("--budget must be positive")
        code = {"laws": cmd_laws, "kan": cmd_kan, "lam": cmd_lam}[args.command](args)
    except SpecError as e:
        print(f"spec error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationOverflow as e:
        print(f"input error: {e} (raise --budget or RELMON_BUDGET)", file=sys.stderr)
        return EXIT_INPUT
    if args.command != "lam":
        print(f"wall-clock: {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
