"""Command-line entry point: ``amalgam-forge <subcommand>``.

Exit status 0/1 is the verdict of the subcommand (strong / not strong, pass /
fail, ...); 2 means the input was rejected.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import key, read_structure, serialize
from .errors import NoDistinctPairs, NoGoodClique, ParseError, PreconditionError, SearchTooLarge, ValidityError
from .strength import DEFAULT_BOUND


def _set(text: str | None) -> frozenset[str]:
    if not text:
        return frozenset()
    return frozenset(p.strip() for p in text.split(",") if p.strip())


def _map(text: str | None) -> dict[str, str]:
    out = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        src, sep, dst = item.partition(":")
        if not sep:
            raise PreconditionError(f"map entry {item!r} must look like a:b")
        out[src.strip()] = dst.strip()
    return out


def _read(path: str):
    return read_structure(path)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _map_comments(f: dict) -> str:
    return "".join(f"# map {p} {f[p]}\n" for p in sorted(f))


def read_cliques(path: str):
    """Clique file: ``clique <ids...> witnesses <x> <y>`` per line."""
    from .cliques import WitnessedClique

    out = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if tokens[0] != "clique" or "witnesses" not in tokens:
            raise ParseError("expected 'clique <ids> witnesses <x> <y>'", lineno)
        i = tokens.index("witnesses")
        try:
            out.append(WitnessedClique(tokens[1:i], tokens[i + 1:]))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return out


def format_cliques(k) -> str:
    return "".join(f"clique {' '.join(key(c.universe))} witnesses {' '.join(key(c.witnesses))}\n"
                   for c in k)


# strength

def cmd_strong(args) -> int:
    from .core import is_substructure
    from .strength import is_strong

    a, b = _read(args.left), _read(args.right)
    if not is_substructure(a, b):
        raise PreconditionError("left structure is not a substructure of the right one")
    cert = is_strong(a.points, b, args.bound)
    sys.stdout.write(cert.describe())
    return 0 if cert.strong else 1


def cmd_closure(args) -> int:
    from .strength import closure

    n = _read(args.input)
    sys.stdout.write(",".join(key(closure(_set(args.set), n, args.bound))) + "\n")
    return 0


def cmd_age(args) -> int:
    from .strength import age_certificate

    cert = age_certificate(_read(args.input), args.bound)
    sys.stdout.write(cert.describe())
    return 0 if cert.strong else 1


# cliques

def cmd_cliques(args) -> int:
    from .cliques import extract_cliques

    n = _read(args.input)
    s = _set(args.set) if args.set is not None else n.points
    sys.stdout.write(format_cliques(extract_cliques(s, n)))
    return 0


def cmd_sdiagram(args) -> int:
    from .cliques import extract_s_structure

    n = _read(args.input)
    s = _set(args.set) if args.set is not None else n.points
    _emit(serialize(extract_s_structure(s, n, args.bound)), args.out)
    return 0


# transforms

def cmd_outsource(args) -> int:
    from .transforms import gradual_outsource_steps, outsource_set

    b = _read(args.input)
    k = read_cliques(args.k)
    l = read_cliques(args.l) if args.l else []
    core = _set(args.core)
    if args.gradual:
        steps = gradual_outsource_steps(b, core, k, l)
        out = steps[-1].result if steps else b
        log = "".join(f"# step {s.clique.tag()} alpha {len(s.alpha)} beta {len(s.beta)} "
                      f"d0 {s.predim_before} -> {s.predim_after}\n" for s in steps)
        _emit(log + serialize(out), args.out)
    else:
        _emit(serialize(outsource_set(b, core, k, l)), args.out)
    return 0


def cmd_genrep(args) -> int:
    from .transforms import generic_representation

    _emit(serialize(generic_representation(_read(args.input))), args.out)
    return 0


def cmd_symmetrize(args) -> int:
    from .transforms import symmetrize

    _emit(serialize(symmetrize(_read(args.input))), args.out)
    return 0


def cmd_rrep(args) -> int:
    from .transforms import r_representation

    _emit(serialize(r_representation(_read(args.input), _read(args.over))), args.out)
    return 0


# amalgam

def cmd_amalgam(args) -> int:
    from .amalgam import free_amalgam_r, mixed_generic_amalgam, simple_amalgam_s

    left, right = _read(args.left), _read(args.right)
    base = _set(args.base)
    if args.mode == "free":
        d = free_amalgam_r(left, right, base)
    elif args.mode == "simple":
        d = simple_amalgam_s(left, right, base)
    else:
        ambient = _read(args.ambient) if args.ambient else None
        d = mixed_generic_amalgam(left, right, base, ambient=ambient)
    _emit(serialize(d), args.out)
    return 0


def cmd_build(args) -> int:
    from .amalgam import certify_chain, generic_chain_builder

    state = generic_chain_builder(args.ext_bound, args.size_bound, args.calculus)
    _emit(serialize(state.current), args.out)
    if args.log:
        Path(args.log).write_text(state.log_lines(), encoding="utf-8")
    ok = certify_chain(state)
    # the structure goes to stdout when no --out is given, so keep the report off it
    (sys.stdout if args.out else sys.stderr).write(state.report() + f"certified {'yes' if ok else 'no'}\n")
    return 0 if ok else 1


def cmd_probe(args) -> int:
    from .amalgam import homogeneity_probe

    rep = homogeneity_probe(_read(args.input), _map(args.map), args.steps, args.bound)
    sys.stdout.write(rep.describe())
    return 0 if rep.ok else 1


# pregeometry

def _table(path: str):
    from .pregeometry import parse_table, pg_table

    text = Path(path).read_text(encoding="utf-8")
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), "")
    if first.startswith(("rstructure", "sstructure")):
        return pg_table(_read(path))
    return parse_table(text)


def cmd_pg(args) -> int:
    from .pregeometry import pg_table

    t = pg_table(_read(args.input))
    if args.table:
        Path(args.table).write_text(t.to_tsv(), encoding="utf-8")
    else:
        sys.stdout.write(t.to_tsv())
    return 0


def cmd_pgiso(args) -> int:
    from .pregeometry import pg_isomorphic

    f = pg_isomorphic(_table(args.left), _table(args.right))
    if f is None:
        sys.stdout.write("verdict not-isomorphic\n")
        return 1
    sys.stdout.write("verdict isomorphic\n" + "".join(f"map {p} {f[p]}\n" for p in sorted(f)))
    return 0


def cmd_extendiso(args) -> int:
    from .pregeometry import emulation, extend_iso_c_to_cs

    base, image, ext = _read(args.base), _read(args.image), _read(args.ext)
    f0 = _map(args.map)
    if args.dir == "c2cs":
        out, f = extend_iso_c_to_cs(base, image, f0, ext, args.bound)
    else:
        out, f = emulation(ext, base, image, f0, args.bound)
    _emit(_map_comments(f) + serialize(out), args.out)
    return 0


# suite and corpus

def cmd_suite(args) -> int:
    from .suite import SuiteConfig, format_report, format_timings, load_config, run_suite

    cfg = load_config(Path(args.config).read_text(encoding="utf-8")) if args.config else SuiteConfig()
    if args.check:
        cfg = SuiteConfig(**{**cfg.__dict__, "checks": tuple(args.check)})
    reports = run_suite(cfg)
    _emit(format_report(reports), args.out)
    if args.timings:
        Path(args.timings).write_text(format_timings(reports), encoding="utf-8")
    return 0 if all(r.ok for r in reports) else 1


def cmd_replay(args) -> int:
    from .suite import replay

    msg = replay(args.tag, Path(args.instance).read_text(encoding="utf-8"))
    sys.stdout.write("pass\n" if msg is None else f"fail\t{msg}\n")
    return 0 if msg is None else 1


def cmd_generate(args) -> int:
    from .corpus import generate_corpus

    paths = generate_corpus(args.out, args.seed, args.count)
    sys.stdout.write(f"wrote {len(paths)} files to {args.out}\n")
    return 0


def cmd_bench(args) -> int:
    from .bench import format_results, run_benchmark

    sys.stdout.write(format_results(run_benchmark(args.points, args.repeat, args.seed)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amalgam-forge",
                                description="Predimension calculus for ternary structures and their clique reducts.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, bound=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        if bound:
            sp.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="free-point limit for subset searches")
        return sp

    sp = add("strong", cmd_strong, "is LEFT a strong substructure of RIGHT", True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp = add("closure", cmd_closure, "smallest strong superset of a point set", True)
    sp.add_argument("--set", default="")
    sp.add_argument("--in", dest="input", required=True)
    sp = add("age", cmd_age, "age membership certificate", True)
    sp.add_argument("--in", dest="input", required=True)

    sp = add("cliques", cmd_cliques, "witnessed cliques inside a point set")
    sp.add_argument("--set")
    sp.add_argument("--in", dest="input", required=True)
    sp = add("sdiagram", cmd_sdiagram, "extracted S-structure on a point set", True)
    sp.add_argument("--set")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")

    sp = add("outsource", cmd_outsource, "outsource a clique family over a core")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--core", default="")
    sp.add_argument("--k", required=True, help="clique file for the outsourced family")
    sp.add_argument("--l", help="clique file for the kept family")
    sp.add_argument("--gradual", action="store_true")
    sp.add_argument("--out")
    for name, fn, text in (("genrep", cmd_genrep, "generic R-representation of an S-structure"),
                           ("symmetrize", cmd_symmetrize, "symmetric reduct of an ordered structure")):
        sp = add(name, fn, text)
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--out")
    sp = add("rrep", cmd_rrep, "ordered representation of B over A")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--over", required=True)
    sp.add_argument("--out")

    sp = add("amalgam", cmd_amalgam, "free, simple or mixed generic amalgam")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--base", default="")
    sp.add_argument("--mode", choices=("free", "simple", "mixed"), default="free")
    sp.add_argument("--ambient", help="structure containing LEFT (mixed mode)")
    sp.add_argument("--out")
    sp = add("build", cmd_build, "bounded generic chain")
    sp.add_argument("--calculus", choices=("r", "s"), default="r")
    sp.add_argument("--ext-bound", type=int, default=3)
    sp.add_argument("--size-bound", type=int, default=12)
    sp.add_argument("--out")
    sp.add_argument("--log")
    sp = add("probe", cmd_probe, "back-and-forth probe of a partial map", True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--map", default="", help="a:b,c:d")
    sp.add_argument("--steps", type=int, default=4)

    sp = add("pg", cmd_pg, "dimension table of a structure")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--table")
    sp = add("pgiso", cmd_pgiso, "isomorphism of two pregeometries (tables or structures)")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp = add("extendiso", cmd_extendiso, "extend a pregeometry isomorphism across calculi", True)
    sp.add_argument("--dir", choices=("c2cs", "cs2c"), required=True)
    sp.add_argument("--base", required=True, help="A (c2cs) or D (cs2c)")
    sp.add_argument("--image", required=True, help="its image D (c2cs) or A (cs2c)")
    sp.add_argument("--ext", required=True, help="the strong extension B (c2cs) or E (cs2c)")
    sp.add_argument("--map", default="", help="base isomorphism a:x,b:y")
    sp.add_argument("--out")

    sp = add("suite", cmd_suite, "run the property suite")
    sp.add_argument("--config")
    sp.add_argument("--check", action="append", help="run only this lemma tag (repeatable)")
    sp.add_argument("--out")
    sp.add_argument("--timings")
    sp = add("replay", cmd_replay, "re-run one serialized suite instance")
    sp.add_argument("--tag", required=True)
    sp.add_argument("--instance", required=True, help="file holding the instance JSON")
    sp = add("generate", cmd_generate, "write the fixture corpus")
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp = add("bench", cmd_bench, "compare compiled and Python kernels")
    sp.add_argument("--points", type=int, nargs="+", default=[10, 14, 18])
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidityError, PreconditionError, SearchTooLarge, NoGoodClique,
            NoDistinctPairs, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
