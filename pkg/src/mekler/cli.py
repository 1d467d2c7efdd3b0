"""Command line front end.

Subcommands:
  nice           niceness report for a host fragment or a fragment JSON file
  fragment       build a fragment, describe it, optionally write it as JSON
  verify-lemmas  run the full verification suite over a configured fragment
  roundtrip      encode a graph, recover it through group queries, compare
  ext-check      index-2 extension axioms and the base-membership formula
  qprobe         root-counting and coset-cover probes on a finite group

Exit codes: 0 all checks passed, 1 a verification failed, 2 the
configuration itself was rejected (bad prime, inadequate fragment,
enumeration budget exceeded, unparseable input).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from .cayley import (
    FiniteGroup,
    cayley_from_context,
    covering_report,
    cyclic_group,
    dihedral_group,
    has_unique_roots,
    nth_roots_count,
    bounded_root_set,
    parse_cayley_text,
    parse_permutation_text,
    power_image,
    sl2_permutation_group,
    symmetric_group,
)
from .formulas import BudgetError
from .graphs import FragmentSpec, all_pairs, build_fragment, check_nice, pair_swap_automorphism
from .group import GroupContext, InducedAutomorphism
from .interpret import natural_graph, roundtrip
from .subgroup import AdequacyError
from .verify import SuiteResult, VerifyConfig, verify_lemmas


def _parse_naturals(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise ValueError("empty naturals list")
    if "," not in text:
        count = int(text)
        if count < 1:
            raise ValueError("natural count must be positive")
        return list(range(count))
    return sorted({int(tok) for tok in text.split(",") if tok.strip()})


def _parse_edges(text: str) -> list[tuple[int, int]]:
    text = (text or "").strip()
    if not text:
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        a, _, b = tok.partition("-")
        out.append((int(a), int(b)))
    return out


def _load_graph(args):
    if getattr(args, "json", None):
        with open(args.json) as fh:
            spec = FragmentSpec.from_json(fh.read())
        return spec.build()
    naturals = _parse_naturals(args.naturals)
    if args.pairs == "all":
        pairs = list(all_pairs(naturals))
    elif args.pairs == "none":
        pairs = []
    else:
        pairs = _parse_edges(args.pairs)
    return build_fragment(naturals, pairs)


def _emit(args, text: str) -> None:
    sys.stdout.write(text)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)


def cmd_nice(args) -> int:
    g = _load_graph(args)
    rep = check_nice(g)
    if args.format == "structured":
        payload = {
            "vertices": len(g),
            "edges": len(g.edges),
            "is_nice": rep.is_nice,
            "has_two_vertices": rep.has_two_vertices,
            "triangle_free": rep.triangle_free,
            "square_free": rep.square_free,
            "separation_ok": rep.separation_ok,
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, rep.summary() + "\n")
    return 0 if rep.is_nice else 1


def cmd_fragment(args) -> int:
    naturals = _parse_naturals(args.naturals)
    if args.pairs == "all":
        pairs = list(all_pairs(naturals))
    elif args.pairs == "none":
        pairs = []
    else:
        pairs = _parse_edges(args.pairs)
    g = build_fragment(naturals, pairs)
    rep = check_nice(g)
    spec = FragmentSpec(
        naturals=tuple(naturals), gadget_pairs=tuple(sorted(pairs)), extra_edges=(), p=args.p
    )
    if args.format == "structured":
        payload = {
            "naturals": list(naturals),
            "gadget_pairs": [list(pr) for pr in sorted(pairs)],
            "vertices": len(g),
            "edges": len(g.edges),
            "is_nice": rep.is_nice,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [
            f"fragment: {len(naturals)} naturals, {len(pairs)} gadgeted pairs",
            f"vertices {len(g)}, edges {len(g.edges)}",
            rep.summary(),
        ]
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(spec.to_json())
        sys.stdout.write(f"fragment JSON written to {args.out}\n")
    return 0


def cmd_verify(args) -> int:
    cfg = VerifyConfig(
        p=args.p,
        seed=args.seed,
        naturals=tuple(_parse_naturals(args.naturals)),
        r_edges=tuple(_parse_edges(args.r_edges)),
        samples=args.budget_samples,
        support_budget=args.budget_support,
        oracle_budget=args.budget_oracle,
        translates=args.translates,
    )
    res = verify_lemmas(cfg)
    _emit(args, res.render_json() if args.format == "structured" else res.render_text())
    return 0 if res.ok else 1


def cmd_roundtrip(args) -> int:
    naturals = _parse_naturals(args.naturals)
    edges = _parse_edges(args.r_edges)
    gamma = natural_graph(naturals, edges)
    result = roundtrip(gamma, p=args.p, pipeline=args.pipeline, seed=args.seed, translates=args.translates)
    if args.format == "structured":
        payload = {
            "input": {"naturals": list(result.input_labels), "edges": sorted(list(e) for e in result.input_edges)},
            "ok": result.ok,
            "pipelines": {},
        }
        for rec in (result.up, result.down):
            if rec is not None:
                payload["pipelines"][rec.pipeline] = {
                    "labels": list(rec.labels),
                    "edges": sorted(list(e) for e in rec.edges),
                }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [result.summary()]
        for rec in (result.up, result.down):
            if rec is not None:
                lines.append(rec.summary())
        _emit(args, "\n".join(lines) + "\n")
    return 0 if result.ok else 1


def cmd_ext_check(args) -> int:
    import random

    from .verify import _extension_checks

    naturals = _parse_naturals(args.naturals)
    edges = _parse_edges(args.r_edges)
    frag = build_fragment(naturals, all_pairs(naturals))
    ctx = GroupContext(frag, args.p)
    aut = InducedAutomorphism(ctx, pair_swap_automorphism(frag, edges))
    cfg = VerifyConfig(p=args.p, seed=args.seed, naturals=tuple(naturals), r_edges=tuple(edges))
    res = SuiteResult(config=cfg.normalized(), backend="n/a")
    _extension_checks(res, ctx, aut, random.Random(args.seed), args.samples)
    _emit(args, "\n".join(c.line() for c in res.checks) + "\n")
    return 0 if res.ok else 1


def _load_probe_group(spec: str) -> FiniteGroup:
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "sl2":
        return sl2_permutation_group(int(arg))
    if kind == "cyclic":
        return cyclic_group(int(arg))
    if kind == "sym":
        return symmetric_group(int(arg))
    if kind == "dihedral":
        return dihedral_group(int(arg))
    if kind == "mekler":
        p = int(arg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ctx = GroupContext(build_fragment([0, 1]), p)
            return cayley_from_context(ctx)
    if kind == "cayley":
        with open(arg) as fh:
            return parse_cayley_text(fh.read())
    if kind == "perm":
        with open(arg) as fh:
            return parse_permutation_text(fh.read())
    raise ValueError(f"unknown group spec {spec!r}; use sl2:Q, cyclic:N, sym:N, dihedral:N, mekler:P, cayley:PATH or perm:PATH")


def cmd_qprobe(args) -> int:
    g = _load_probe_group(args.group)
    n = args.n
    image = power_image(g, n)
    unique = has_unique_roots(g, n)
    roots_e = nth_roots_count(g, g.identity, n)
    rep = covering_report(g, n)
    if args.format == "structured":
        payload = {
            "group": args.group,
            "order": len(g),
            "exponent": n,
            "power_image_size": len(image),
            "identity_root_count": roots_e,
            "unique_roots": unique,
            "cover_size": rep.covering_size,
            "cover_reps": list(rep.reps),
            "cover_exact": rep.exact,
        }
        if args.m is not None:
            payload["bounded_root_set_size"] = len(bounded_root_set(g, n, args.m))
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            f"group {args.group}: order {len(g)}",
            f"power map y -> y^{n}: image size {len(image)}, "
            f"identity has {roots_e} roots, unique roots: {'yes' if unique else 'no'}",
        ]
        if args.m is not None:
            bset = bounded_root_set(g, n, args.m)
            lines.append(f"elements with 1..{args.m} roots: {len(bset)}")
        lines.append(rep.summary())
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _add_fragment_flags(sp, with_json=False):
    sp.add_argument("--naturals", default="0,1,2", help="comma list of naturals, or a bare count")
    sp.add_argument("--pairs", default="all", help="'all', 'none', or a comma list like 0-1,1-2")
    if with_json:
        sp.add_argument("--json", default=None, help="fragment JSON file (overrides --naturals/--pairs)")


def _add_common_flags(sp):
    sp.add_argument("--p", type=int, default=3, help="odd prime exponent (default 3)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.add_argument("--out", default=None, help="also write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mekler", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("nice", help="check the niceness conditions")
    _add_fragment_flags(sp, with_json=True)
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_nice)

    sp = sub.add_parser("fragment", help="build and describe a host fragment")
    _add_fragment_flags(sp)
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_fragment)

    sp = sub.add_parser("verify-lemmas", help="run the verification suites")
    sp.add_argument("--naturals", default="0,1,2", help="comma list of naturals, or a bare count")
    sp.add_argument("--r-edges", default="0-1", help="encoded edge set, comma list like 0-1,1-2")
    sp.add_argument("--budget-samples", type=int, default=200)
    sp.add_argument("--budget-support", type=int, default=3)
    sp.add_argument("--budget-oracle", type=int, default=3**12)
    sp.add_argument("--translates", type=int, default=2)
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("roundtrip", help="encode a graph and recover it from the group")
    sp.add_argument("--naturals", default="0,1,2,3", help="comma list of naturals, or a bare count")
    sp.add_argument("--r-edges", default="", help="graph edges, comma list like 0-1,1-2")
    sp.add_argument("--pipeline", choices=("up", "down", "both"), default="both")
    sp.add_argument("--translates", type=int, default=2)
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("ext-check", help="index-2 extension axioms and membership formula")
    sp.add_argument("--naturals", default="0,1", help="comma list of naturals, or a bare count")
    sp.add_argument("--r-edges", default="0-1")
    sp.add_argument("--samples", type=int, default=200)
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_ext_check)

    sp = sub.add_parser("qprobe", help="finite root-counting and cover probes")
    sp.add_argument("--group", required=True, help="sl2:Q | cyclic:N | sym:N | dihedral:N | mekler:P | cayley:PATH | perm:PATH")
    sp.add_argument("--n", type=int, default=2, help="power exponent")
    sp.add_argument("--m", type=int, default=None, help="root-count bound for the bounded root set")
    _add_common_flags(sp)
    sp.set_defaults(func=cmd_qprobe)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (AdequacyError, BudgetError) as err:
        print(f"configuration rejected: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"configuration rejected: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
