"""Command-line front end: verification suites over the pair registry,
pencil analysis from matrix files, and deterministic report emission."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .liealg import (
    DEFAULT_PAIRS,
    build_symmetric_pair,
    parse_pair_key,
    sampled_index,
)
from .brackets import INFINITY, structure_constants_t
from .invariants import basic_invariants, ggs_check, r0_onto_check, sigma_normalize
from .zconstruct import (
    VerificationReport,
    chain_maximal_pc,
    lemma_sum_reg_verify,
    manakov_restrict,
    mf_generators,
    verify_commutativity,
    verify_trdeg_freeness,
    z_generators,
    z_infty_generators,
    ztilde_generators,
)
from .identities import det_ad_factor_check, kostant_identity_suite, q_factor_check
from .pencil import (
    bound_and_sumdim_check,
    generic_rank_and_L,
    jk_summary,
    orthogonality_check,
    read_pencil_file,
    singular_members,
)

SCHEMA = "poissonz.report/1"

CHECK_NAMES = [
    "construction",
    "invariants",
    "ggs",
    "zfamily",
    "r0onto",
    "commutativity",
    "trdeg",
    "index",
    "zinfty",
    "lemma23",
    "identities",
    "manakov",
]
DEFAULT_CHECKS = [c for c in CHECK_NAMES if c != "manakov"]


@dataclass
class RunConfig:
    pairs: list
    mode: str = "auto"
    seed: int = 1
    samples: int = 5
    height: int = 97
    jobs: int = 1
    output: str = "text"
    checks: list = field(default_factory=lambda: list(DEFAULT_CHECKS))
    chain: str | None = None


def _mode_for(pair, cfg):
    if cfg.mode != "auto":
        return cfg.mode
    return "symbolic" if pair.dim <= 15 else "sampled"


def run_pair_suite(key, cfg: RunConfig) -> VerificationReport:
    """All checks for one registered pair, in a fixed order."""
    rep = VerificationReport(key, seed=cfg.seed, samples=cfg.samples)
    pair = build_symmetric_pair(key)
    checks = cfg.checks
    if "construction" in checks:
        rep.add("construction", True, pair.verify())
        rep.add("dim-split", pair.dim, pair.n0 + pair.n1)
    invset = basic_invariants(pair.g)
    norm = sigma_normalize(invset, pair, seed=cfg.seed)
    if "invariants" in checks:
        rep.add("invariant-count", pair.rank, norm.size)
        rep.add(
            "plus-eigenvector-count",
            pair.rank0,
            sum(1 for e in norm.sigma_eigs if e == 1),
        )
    if "ggs" in checks:
        g = ggs_check(norm, pair, seed=cfg.seed)
        rep.add("ggs-degree-sum", g.dim_g1, g.sum_g1_degrees)
        rep.add("ggs-top-independent", True, g.top_independent)
    zfam = z_generators(pair, norm)
    ztfam = ztilde_generators(pair, norm)
    if "zfamily" in checks:
        rep.add("z-generator-count", pair.trdeg_z, zfam.size)
        rep.add("ztilde-generator-count", pair.trdeg_z, ztfam.size)
    if "r0onto" in checks:
        onto, _ = r0_onto_check(pair, seed=cfg.seed)
        rep.add("r0-onto-classified", True, True)
        rep.add("r0-onto", onto, onto)
    mode = _mode_for(pair, cfg)
    if "commutativity" in checks:
        rep.merge(
            verify_commutativity(
                zfam, pair, mode=mode, seed=cfg.seed, samples=cfg.samples, height=cfg.height
            )
        )
        rep.merge(
            verify_commutativity(
                ztfam,
                pair,
                mode="sampled" if mode == "sampled" else "symbolic",
                seed=cfg.seed + 1,
                samples=cfg.samples,
                height=cfg.height,
            )
        )
    if "trdeg" in checks:
        rep.merge(
            verify_trdeg_freeness(zfam, pair, trials=cfg.samples, seed=cfg.seed, height=cfg.height)
        )
        rep.merge(
            verify_trdeg_freeness(
                ztfam, pair, trials=cfg.samples, seed=cfg.seed + 1, height=cfg.height
            )
        )
    if "index" in checks:
        for t in (Fraction(0), Fraction(1), Fraction(7)):
            idx = sampled_index(
                structure_constants_t(pair, t), pair.dim, trials=cfg.samples,
                seed=cfg.seed, height=cfg.height,
            )
            rep.add(f"index@t={t}", pair.rank, idx)
        idx = sampled_index(
            structure_constants_t(pair, INFINITY), pair.dim, trials=cfg.samples,
            seed=cfg.seed, height=cfg.height,
        )
        rep.add("index@t=inf", pair.n0 + pair.rank - pair.rank0, idx)
    if "zinfty" in checks:
        zinf = z_infty_generators(pair, norm)
        rep.add(
            "zinfty-count", pair.n0 + norm.size - pair.rank0, zinf.size
        )
        from .brackets import table_poisson_bracket

        tinf = structure_constants_t(pair, INFINITY)
        bad = []
        for i in range(zinf.size):
            for j in range(i + 1, zinf.size):
                if not table_poisson_bracket(tinf, zinf.gens[i], zinf.gens[j]).is_zero():
                    bad.append((i, j))
        rep.add("zinfty-commutativity", [], bad)
        import random as _random

        from .exactalg import vectors_rank
        from .liealg import random_vector
        from .polyring import jacobian_at

        rng = _random.Random(cfg.seed)
        best = 0
        for _ in range(cfg.samples):
            xi = random_vector(rng, pair.dim, cfg.height)
            best = max(best, vectors_rank(jacobian_at(zinf.gens, xi)))
            if best == zinf.size:
                break
        rep.add("zinfty-rank", zinf.size, best)
    if "lemma23" in checks:
        rep.merge(lemma_sum_reg_verify(pair, zfam, seed=cfg.seed, height=cfg.height))
    if "identities" in checks:
        rep.merge(
            kostant_identity_suite(pair, norm, "full", seed=cfg.seed, points=cfg.samples, height=cfg.height)
        )
        if pair.inner:
            rep.merge(
                kostant_identity_suite(pair, norm, "inner", seed=cfg.seed, points=cfg.samples, height=cfg.height)
            )
            rep.merge(det_ad_factor_check(pair, norm, seed=cfg.seed, points=3, height=cfg.height))
        else:
            rep.merge(
                kostant_identity_suite(pair, norm, "outer", seed=cfg.seed, points=cfg.samples, height=cfg.height)
            )
            rep.merge(q_factor_check(pair, norm, seed=cfg.seed, points=cfg.samples, height=cfg.height))
    if "manakov" in checks:
        rep.merge(
            manakov_restrict(zfam, pair, seed=cfg.seed, samples=cfg.samples, height=cfg.height)
        )
    rep.meta = {
        "bidegrees": sorted(
            f"({p[2][0]}|{p[2][1]})" if p[0] == "bihom" else "(1|0)"
            for p in zfam.provenance
        ),
        "degrees": zfam.degrees(),
    }
    return rep


def run_chain_suite(chain_key, cfg: RunConfig):
    descriptors = [d.strip() for d in chain_key.split(">")]
    fam, rep, _ = chain_maximal_pc(descriptors, seed=cfg.seed, samples=cfg.samples, height=cfg.height)
    rep.meta = {"degrees": fam.degrees()}
    return rep


def run_pencil_file(path, cfg: RunConfig):
    p = read_pencil_file(path)
    rep = VerificationReport(f"pencil:{os.path.basename(path)}", seed=cfg.seed)
    m, l_basis = generic_rank_and_L(p)
    rep.add("generic-rank", m, m)
    rep.add("dim-kernel-span", len(l_basis), len(l_basis))
    sing = singular_members(p, m=m)
    rep.add("singular-params", [str(t) for t in sing.params], [str(t) for t in sing.params])
    rep.add("degenerate-member-singular", sing.b_member_singular, sing.b_member_singular)
    ok, witness = orthogonality_check(p)
    rep.add("kernel-orthogonality", True, ok)
    for t in sing.params:
        res = bound_and_sumdim_check(p, t)
        rep.add(f"rank-bound@{t}", True, res["bound_holds"])
        if res["a4_applicable"]:
            rep.add(f"dimension-identities@{t}", True, res["a4_holds"])
    if sing.b_member_singular and not sing.params:
        res = bound_and_sumdim_check(p, None)
        rep.add("rank-bound@inf", True, res["bound_holds"])
        if res["a4_applicable"]:
            rep.add("dimension-identities@inf", True, res["a4_holds"])
    rep.meta = {"jk": {k: str(v) for k, v in jk_summary(p).items()}}
    return rep


# ---------------------------------------------------------------------------
# report emission


def emit_json(reports, cfg: RunConfig):
    payload = {
        "schema": SCHEMA,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "mode": cfg.mode,
        "pass": all(r.passed for r in reports),
        "reports": [
            dict(r.to_dict(), meta=getattr(r, "meta", {})) for r in reports
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def emit_text(reports, cfg: RunConfig):
    lines = []
    for r in reports:
        lines.append(f"== {r.pair} (seed={r.seed})")
        for c in r.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(
                f"  [{status}] {c.name}: expected={c.expected!r} computed={c.computed!r}"
            )
        lines.append(f"  => {'PASS' if r.passed else 'FAIL'}")
    lines.append(
        f"overall: {'PASS' if all(r.passed for r in reports) else 'FAIL'}"
    )
    return "\n".join(lines) + "\n"


def emit_csv(reports, cfg: RunConfig):
    lines = ["report,check,expected,computed,pass"]
    for r in reports:
        meta = getattr(r, "meta", {})
        if "degrees" in meta:
            lines.append("degrees," + ",".join(str(d) for d in meta["degrees"]))
        if "bidegrees" in meta:
            lines.append("bidegrees," + ",".join(meta["bidegrees"]))
        for c in r.checks:
            lines.append(
                f"{r.pair},{c.name},{_csv_cell(c.expected)},{_csv_cell(c.computed)},{c.passed}"
            )
    return "\n".join(lines) + "\n"


def _csv_cell(x):
    s = str(x)
    return '"' + s.replace('"', "'") + '"' if ("," in s or '"' in s) else s


def emit_report(reports, cfg: RunConfig):
    if cfg.output == "json":
        return emit_json(reports, cfg)
    if cfg.output == "csv":
        return emit_csv(reports, cfg)
    return emit_text(reports, cfg)


# ---------------------------------------------------------------------------
# argument handling


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="poissonz",
        description=(
            "Exact verification of Poisson-commutative subalgebras attached "
            "to involutions of classical Lie algebras."
        ),
        epilog=(
            "Pair keys: AI:n = (sl_n, so_n); AII:n = (sl_2n, sp_2n); "
            "AIII:p,q = (sl_{p+q}, s(gl_p+gl_q)); BDI:p,q = (so_{p+q}, so_p+so_q) "
            "(use BDI:2n-1,1 for the odd-sphere pairs); CII:p,q = "
            "(sp_{2p+2q}, sp_2p+sp_2q); DBL:sl2 etc. = (h+h, h); 'all' = the "
            "default registry.  Chains: --chain 'so5>so4>so2+so2'."
        ),
    )
    sub = ap.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["auto", "symbolic", "sampled"], default="auto")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--samples", type=int, default=5)
    common.add_argument("--height", type=int, default=97)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--output", choices=["text", "json", "csv"], default="text")
    common.add_argument("--out", default=None, help="also write the report to this file")

    vp = sub.add_parser("verify", parents=[common], help="run the verification suite")
    vp.add_argument("keys", nargs="*", help="pair keys, or 'all'")
    vp.add_argument("--pair", action="append", default=[], help="additional pair key")
    vp.add_argument(
        "--checks",
        default=",".join(DEFAULT_CHECKS),
        help="comma-separated subset of: " + ",".join(CHECK_NAMES),
    )
    vp.add_argument("--chain", default=None, help="chain descriptor like 'so5>so4>so2+so2'")

    pp = sub.add_parser("pencil", parents=[common], help="analyse a pencil file")
    pp.add_argument("file", help="pencil matrix file")
    return ap


def _resolve_seed(ns):
    if ns.seed is not None:
        return ns.seed
    env = os.environ.get("POISSONZ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 1


def main(argv=None):
    ap = _build_parser()
    ns = ap.parse_args(argv)
    if ns.command is None:
        ap.print_help()
        return 2

    if ns.command == "pencil":
        cfg = RunConfig([], mode=ns.mode, seed=_resolve_seed(ns), samples=ns.samples,
                        height=ns.height, jobs=ns.jobs, output=ns.output)
        if not os.path.exists(ns.file):
            print(f"error: no such file {ns.file!r}", file=sys.stderr)
            return 2
        try:
            reports = [run_pencil_file(ns.file, cfg)]
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = emit_report(reports, cfg)
        sys.stdout.write(text)
        if ns.out:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return 0 if all(r.passed for r in reports) else 1

    keys = list(ns.keys) + list(ns.pair)
    if "all" in keys:
        keys = [k for k in keys if k != "all"] + [
            k for k in DEFAULT_PAIRS if k not in keys
        ]
    if not keys and not ns.chain:
        print("error: no pair keys given (try 'all')", file=sys.stderr)
        return 2
    checks = [c.strip() for c in ns.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in CHECK_NAMES]
    if unknown:
        print(f"error: unknown checks {unknown}", file=sys.stderr)
        return 2
    for key in keys:
        try:
            parse_pair_key(key)
        except KeyError:
            print(f"error: unknown pair key {key!r}", file=sys.stderr)
            return 2
    cfg = RunConfig(
        keys,
        mode=ns.mode,
        seed=_resolve_seed(ns),
        samples=ns.samples,
        height=ns.height,
        jobs=ns.jobs,
        output=ns.output,
        checks=checks,
        chain=ns.chain,
    )

    tasks = [("pair", k) for k in keys]
    if ns.chain:
        tasks.append(("chain", ns.chain))

    def run_one(task):
        kind, arg = task
        if kind == "pair":
            return run_pair_suite(arg, cfg)
        return run_chain_suite(arg, cfg)

    if cfg.jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(run_one, tasks))
    else:
        reports = [run_one(t) for t in tasks]

    text = emit_report(reports, cfg)
    sys.stdout.write(text)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
