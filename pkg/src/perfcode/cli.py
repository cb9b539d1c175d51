"""Command-line interface.

Exit codes: 0 the property holds, 1 it fails (witness on stdout), 2 usage or
input errors (message on stderr).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    BinaryCode,
    CodeFormatError,
    PreconditionError,
    QuaternaryCode,
    code_distance,
    format_code,
    parse_code,
    word_to_str,
    write_code,
)
from .generators import KINDS, GeneratorSpec
from .mds import (
    from_latin,
    is_double_mds,
    is_mds,
    perfect_code_of_length,
    s_of_m,
    s_of_m_twofold,
    search_double_mds,
    split_double_mds,
    theorem7_pipeline,
    to_latin,
)
from .partition import (
    check_optimal_code,
    compute_parameters,
    derive_partition,
    distribution_tables,
    proposition_values,
    relations_from_tables,
    theorem_matrix,
)
from .perfect import (
    BudgetError,
    build_B,
    build_D,
    check_B_properties,
    check_D_properties,
    is_1perfect,
    is_twofold_1perfect,
    lengthen,
    split_twofold,
)
from .splitgraph import component_stats, enumerate_splits, split_code, write_split
from .sts import TripleSystem, check_paper_example, extract_sts, split_triple_system, verify_triple_system

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _progress(args, message: str) -> None:
    if getattr(args, "progress", False):
        print(message, file=sys.stderr, flush=True)


def _load(path: str, quaternary: bool = False):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        code = parse_code(text, quaternary=quaternary)
    except CodeFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    return code, hashlib.sha256(text.encode()).hexdigest()


def _load_set(path: str) -> tuple[BinaryCode, str]:
    code, digest = _load(path)
    if not isinstance(code, BinaryCode):
        raise UsageError(f"{path}: expected a code without repeated words")
    return code, digest


def _header(construction: str, digest: str | None = None) -> list[str]:
    lines = [f"perfcode {__version__}: {construction}"]
    if digest:
        lines.append(f"input sha256 {digest}")
    return lines


def _print_word(w: int, n: int) -> None:
    print(word_to_str(w, n))


def _verdict(ok: bool) -> int:
    print("RESULT: " + ("HOLDS" if ok else "FAILS"))
    return OK if ok else FAIL


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    c1, _ = _load_set(args.code)
    m = check_optimal_code(c1)
    n = c1.length
    print(f"code: n={n} M={len(c1)} d={code_distance(c1)} (m={m})")
    _progress(args, "deriving partition")
    p = derive_partition(c1)
    print("part sizes: " + " ".join(str(s) for s in p.sizes()))
    params = compute_parameters(p)
    ok = True
    if hasattr(params, "rows"):
        print("parameter matrix:")
        print(params.format())
        matches = params.rows == theorem_matrix(n)
        print(f"matrix matches expected values: {'yes' if matches else 'no'}")
        ok &= matches
    else:
        print(f"NOT EQUITABLE: {params}")
        print(word_to_str(params.vertex, n))
        return FAIL
    _progress(args, "computing distribution tables")
    tables = distribution_tables(p)
    print("mean distributions (i j: l=0..n):")
    for (i, j), t in sorted(tables.items()):
        print(f"  {i} {j}: " + " ".join(str(v) for v in t.mean))
    vals = proposition_values(tables, n)
    print(
        f"values: A11[n]={vals.a11_n} A11[n-1]={vals.a11_n1} A24[1]={vals.a24_1} "
        f"A42[1]={vals.a42_1} A44[1]={vals.a44_1} A34[1]={vals.a34_1} "
        f"C3 neighbours in C4: {vals.c3_min}..{vals.c3_max}"
    )
    ok &= vals.ok
    rel = relations_from_tables(n, tables, p.sizes())
    print(rel.format())
    ok &= rel.ok
    return _verdict(ok)


def cmd_relations(args) -> int:
    c1, _ = _load_set(args.code)
    p = derive_partition(c1)
    rel = relations_from_tables(p.n, distribution_tables(p), p.sizes())
    print(rel.format())
    return _verdict(rel.ok)


def cmd_split(args) -> int:
    code, _ = _load(args.code)
    if isinstance(code, QuaternaryCode):
        raise UsageError("split expects a binary code")
    res = split_code(code, shortest=args.shortest)
    if not res.ok:
        print("UNSPLITTABLE")
        print(res.odd_cycle.format(), end="")
        return FAIL
    stats = component_stats(res.graph)
    print(f"nu: {res.nu}")
    print(stats.format())
    base = args.out or args.code
    a, b = write_split(res, base)
    print(f"wrote {a} {b}")
    return OK


def cmd_lengthen(args) -> int:
    c1, digest = _load_set(args.code)
    p = derive_partition(c1)
    res = split_code(p.parts[3])
    if not res.ok:
        print("C4 is unsplittable; C1 00 lies in no 1-perfect code")
        print(res.odd_cycle.format(), end="")
        return FAIL
    out = Path(args.out or (str(Path(args.code).with_suffix("")) + ".lengthened.code"))
    if not args.all:
        code = lengthen(c1, (res.first, res.second), p)
        _progress(args, f"sweeping H^{code.length}")
        chk = is_1perfect(code, args.threads)
        write_code(code, out, _header("lengthen", digest))
        print(f"nu: {res.nu}")
        print(f"wrote {out} ({len(code)} words)")
        if not chk:
            print("NOT 1-PERFECT")
            _print_word(chk.witness, code.length)
        return _verdict(chk.ok)
    total = 1 << res.nu
    print(f"nu: {res.nu}, lengthenings: {total}")
    ok = True
    stem = str(out.with_suffix(""))
    for k, split in enumerate(enumerate_splits(p.parts[3], args.cap, res.graph)):
        code = lengthen(c1, split, p)
        chk = is_1perfect(code, args.threads)
        path = f"{stem}.{k}.code"
        write_code(code, path, _header(f"lengthen split {k} of {total}", digest))
        print(f"{path}: {'1-perfect' if chk else 'NOT 1-perfect'}")
        ok &= chk.ok
    return _verdict(ok)


def cmd_twofold(args) -> int:
    c1, digest = _load_set(args.code)
    p = derive_partition(c1)
    variant = args.variant.upper()
    t = build_B(c1, p) if variant == "B" else build_D(c1, p)
    props = check_B_properties(t, c1) if variant == "B" else check_D_properties(t, c1)
    _progress(args, f"sweeping H^{t.length}")
    perf = is_twofold_1perfect(t, args.threads)
    print(f"{variant}: {len(t)} distinct words, total {t.total}")
    print(f"twofold 1-perfect: {'OK' if perf else 'FAIL'}")
    print(f"properties: {'OK' if props else 'FAIL'}")
    ok = perf.ok and props.ok
    if args.out:
        write_code(t, args.out, _header(f"twofold {variant}", digest))
    if args.split:
        s = split_twofold(t, c1, variant, args.threads)
        if s.ok:
            print("split: two 1-perfect halves" + (" (verified)" if s.verified else ""))
            if args.out:
                for name, half in zip("AB", s.halves):
                    write_code(half, f"{args.out}.part{name}", _header(f"twofold {variant} half {name}", digest))
        else:
            print("split: UNSPLITTABLE")
            print(s.odd_cycle.format(), end="")
            ok = False
    for chk in (perf, props):
        if not chk and chk.witness is not None:
            _print_word(chk.witness, t.length)
    return _verdict(ok)


def cmd_verify(args) -> int:
    code, _ = _load(args.code)
    if isinstance(code, QuaternaryCode):
        raise UsageError("verify expects a binary code")
    _progress(args, f"sweeping H^{code.length}")
    chk = is_twofold_1perfect(code, args.threads) if args.twofold else is_1perfect(code, args.threads)
    label = "twofold 1-perfect" if args.twofold else "1-perfect"
    if chk:
        print(f"{label}: OK")
        return OK
    print(f"{label}: FAIL ({chk.detail})")
    _print_word(chk.witness, code.length)
    return FAIL


def cmd_sts(args) -> int:
    if args.paper_example:
        report = check_paper_example()
        print(report.format())
        return OK if report.ok else FAIL
    if not args.code:
        raise UsageError("give a code file or --paper-example")
    code, _ = _load(args.code)
    if isinstance(code, QuaternaryCode):
        raise UsageError("sts expects a binary code")
    t = extract_sts(code)
    chk = verify_triple_system(t) if args.fold is None else verify_triple_system(TripleSystem(t.points, t.blocks, args.fold))
    print(f"points: {t.points}, blocks: {t.block_count}, fold: {args.fold or t.fold}")
    print(f"TRIPLE SYSTEM: {'OK' if chk else 'FAIL'}" + (f"  ({chk.detail})" if chk.detail else ""))
    if not chk:
        return FAIL
    if t.fold == 2 or args.fold == 2:
        res = split_triple_system(t)
        if res.ok:
            print("SPLITTABLE: yes")
        else:
            print("SPLITTABLE: no")
            print(res.odd_cycle.format(), end="")
    return OK


def cmd_mds(args) -> int:
    if args.mds_command == "search":
        if args.budget <= 0:
            raise UsageError("--budget must be positive")
        f = search_double_mds(args.m, budget=args.budget, symmetry=args.symmetry, log_path=args.log)
        print(f.format())
        for hit in f.hits:
            print("HIT " + " ".join(hit["words"]))
        return FAIL if f.hits else OK
    code, digest = _load(args.code, quaternary=True)
    if args.mds_command == "check":
        mds, dmds = is_mds(code), is_double_mds(code)
        print(f"MDS: {'yes' if mds else 'no'}")
        print(f"double-MDS: {'yes' if dmds else 'no'}")
        if mds:
            return OK
        if not dmds:
            print(f"line: {dmds.witness}")
            return FAIL
        for name, target in (("code", code), ("complement", code.complement())):
            s = split_double_mds(target)
            print(f"{name} splittable: {'yes' if s else 'no'}")
            if not s:
                print("ODD_CYCLE " + str(len(s.odd_cycle)))
                print("\n".join(s.cycle_strings()))
        return OK
    if args.mds_command == "latin":
        latin = to_latin(code)
        assert from_latin(latin) == code
        print(f"shape: {'x'.join(map(str, latin.shape))}")
        for idx in np.ndindex(latin.shape):
            print("".join(map(str, idx)) + f" {int(latin.cells[idx])}")
        return OK
    if args.mds_command == "s-of-m":
        tail = perfect_code_of_length(code.m - 1)
        if is_mds(code):
            out = s_of_m(code, tail)
            chk = is_1perfect(out, args.threads)
            print(f"S(M): {len(out)} words, 1-perfect: {'OK' if chk else 'FAIL'}")
            if args.out:
                write_code(out, args.out, _header("S(M)", digest))
            return _verdict(chk.ok)
        res = s_of_m_twofold(code, tail)
        print(f"S(M): {len(res.code)} distinct, total {res.code.total}, twofold 1-perfect: {'OK' if res.twofold else 'FAIL'}")
        print(f"M splittable: {'yes' if res.m_split else 'no'}; S(M) splittable: {'yes' if res.s_splittable else 'no'}")
        if res.transported_cycle is not None:
            print(res.transported_cycle.format(), end="")
        if args.out:
            write_code(res.code, args.out, _header("S(M), double-MDS input", digest))
        return _verdict(res.twofold.ok and res.consistent)
    if args.mds_command == "pipeline":
        c1, report = theorem7_pipeline(code, args.k)
        print(report.format())
        if args.out:
            write_code(c1, args.out, _header(f"pipeline k={args.k}", digest))
        return _verdict(report.ok)
    raise UsageError("unknown mds command")


def cmd_gen(args) -> int:
    coords = tuple(int(c) for c in args.coords.split(",")) if args.coords else None
    try:
        spec = GeneratorSpec(args.kind, args.m, coords, args.structure, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = spec.build()
    text = format_code(code, _header(spec.describe()))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out} ({len(code)} words)")
    else:
        sys.stdout.write(text)
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perfcode", description="Perfect-code constructions and verifiers.")
    parser.add_argument("--version", action="version", version=f"perfcode {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    common.add_argument("--progress", action="store_true", help="stage messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="partition, parameters and distributions of a C1 code")
    p.add_argument("code")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("relations", parents=[common], help="check the identities between mean distributions")
    p.add_argument("code")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("split", parents=[common], help="split into two distance-3 codes")
    p.add_argument("code")
    p.add_argument("--out", help="base path for .partA/.partB (default: input path)")
    p.add_argument("--shortest", action="store_true", help="report a shortest odd cycle")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("lengthen", parents=[common], help="extend C1 00 to 1-perfect codes")
    p.add_argument("code")
    p.add_argument("--out")
    p.add_argument("--all", action="store_true", help="enumerate the 2^nu lengthenings")
    p.add_argument("--cap", type=int, default=None, help="at most this many codes with --all")
    p.set_defaults(func=cmd_lengthen)

    p = sub.add_parser("twofold", parents=[common], help="build the B or D twofold code of C1")
    p.add_argument("code")
    p.add_argument("--variant", choices=["B", "D", "b", "d"], default="B")
    p.add_argument("--out")
    p.add_argument("--split", action="store_true")
    p.set_defaults(func=cmd_twofold)

    p = sub.add_parser("verify", parents=[common], help="exhaustive 1-perfect check")
    p.add_argument("code")
    p.add_argument("--twofold", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sts", parents=[common], help="triple systems of a code")
    p.add_argument("code", nargs="?")
    p.add_argument("--paper-example", action="store_true", help="the embedded unsplittable twofold STS(15)")
    p.add_argument("--fold", type=int, choices=[1, 2])
    p.set_defaults(func=cmd_sts)

    p = sub.add_parser("mds", parents=[common], help="quaternary MDS and double-MDS codes")
    msub = p.add_subparsers(dest="mds_command", required=True)
    q = msub.add_parser("check", parents=[common])
    q.add_argument("code")
    q = msub.add_parser("latin", parents=[common])
    q.add_argument("code")
    q = msub.add_parser("s-of-m", parents=[common])
    q.add_argument("code")
    q.add_argument("--out")
    q = msub.add_parser("pipeline", parents=[common])
    q.add_argument("code")
    q.add_argument("--k", type=int, default=4)
    q.add_argument("--out")
    q = msub.add_parser("search", parents=[common])
    q.add_argument("--m", type=int, choices=[2, 3], required=True)
    q.add_argument("--budget", type=int, default=1_000_000)
    q.add_argument("--symmetry", action="store_true")
    q.add_argument("--log", help="JSON-lines file for hits")
    p.set_defaults(func=cmd_mds)

    p = sub.add_parser("gen", parents=[common], help="generate a code")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--coords", help="comma-separated 1-based coordinates")
    p.add_argument("--structure", choices=["Z4", "Z2xZ2"], default="Z4")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (UsageError, PreconditionError, BudgetError, ValueError) as exc:
        print(f"perfcode: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
