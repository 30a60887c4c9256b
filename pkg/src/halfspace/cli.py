"""Batch command-line front end.

Subcommands: simulate (Monte Carlo batches), pfaffian-cdf (window Fredholm
Pfaffian tables), limit-table (limiting distributions), verify (invariant
suites; exit 1 on failure), converge (rescaled-cdf distance tables).  Every
run writes a manifest JSON next to its CSV with the resolved configuration.
Exit codes: 0 ok, 1 failed verification, 2 invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(header)
        for row in rows:
            wr.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def _write_manifest(path, cfg):
    doc = {"version": __version__, "config": cfg}
    with open(path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)


def _out_paths(out):
    base, _ = os.path.splitext(out)
    return out, base + ".manifest.json"


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get("HALFSPACE_WORKERS", "1"))


# -- simulate ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    from . import asep, lattice

    out, man = _out_paths(args.out)
    if args.model == "asep":
        if args.alpha is None or args.beta is None:
            if args.t is None or args.nu is None:
                print("simulate asep needs --alpha/--beta or --t/--nu", file=sys.stderr)
                return 2
            alpha, beta, degen = asep.rates_from_params(args.q, args.t, args.nu)
            print(f"converted (t={args.t}, nu={args.nu}) -> "
                  f"(alpha={alpha:.12g}, beta={beta:.12g})"
                  + (" [t=0 degenerate family]" if degen else ""))
        else:
            alpha, beta = args.alpha, args.beta
        r = asep.mc_cdf(args.q, alpha, beta, args.tau, args.samples, seed=args.seed)
        _write_csv(out, ["s", "cdf", "stderr"],
                   list(zip(r["s"].tolist(), r["cdf"], r["stderr"])))
    elif args.model == "sixvertex":
        params = lattice.SixVertexParams(args.q, args.t, args.nu, (args.a,) * args.n)
        try:
            params.validate()
        except ValueError as e:
            print(f"invalid parameters: {e}", file=sys.stderr)
            return 2
        hs = lattice.sample_heights(args.n, params, args.samples, seed=args.seed)
        vals, counts = np.unique(hs, return_counts=True)
        _write_csv(out, ["h", "count", "freq"],
                   [(int(v), int(c), c / args.samples) for v, c in zip(vals, counts)])
    else:
        print("unknown model", file=sys.stderr)
        return 2
    _write_manifest(man, {k: v for k, v in vars(args).items() if k != "func"})
    print(f"wrote {out}")
    return 0


# -- pfaffian-cdf -------------------------------------------------------------

def cmd_pfaffian_cdf(args) -> int:
    from .pfaffian import HeightKernel, fredholm_pfaffian_cdf

    out, man = _out_paths(args.out)
    try:
        if args.model == "sixvertex":
            kern = HeightKernel("sixvertex", q=args.q, t=args.t, nu=args.nu,
                                zeta=args.zeta, n=args.n, a=args.a, nodes=args.nodes)
        else:
            kern = HeightKernel("asep", q=args.q, t=args.t, nu=args.nu,
                                zeta=args.zeta, tau=args.tau, nodes=args.nodes)
    except ValueError as e:
        print(f"invalid parameters: {e}", file=sys.stderr)
        return 2
    rows = []
    for s in range(args.s_min, args.s_max + 1, args.step):
        val, diag = fredholm_pfaffian_cdf(kern, s)
        rows.append((s, val, diag["window_err"], diag["window"]))
    _write_csv(out, ["s", "cdf", "window_err", "window"], rows)
    _write_manifest(man, {**{k: v for k, v in vars(args).items() if k != "func"},
                          "radii": kern.radii, "pole_count": kern.n_max + 1})
    print(f"wrote {out}")
    return 0


# -- limit-table -------------------------------------------------------------

def cmd_limit_table(args) -> int:
    from .limits import LimitKernel, F_limit

    out, man = _out_paths(args.out)
    ss = np.arange(args.s_min, args.s_max + 1e-9, args.s_step)
    fams = [f.strip() for f in args.dist.split(",") if f.strip()]
    xis = [float(x) for x in args.xi.split(",")] if args.xi else []
    cols = {}
    for fam in fams:
        if fam not in ("gse", "goe", "cross"):
            print(f"unknown family {fam!r}", file=sys.stderr)
            return 2
        if fam == "cross":
            for xi in (xis or [1.0]):
                spec = LimitKernel(family="cross", xi=xi)
                cols[f"F_cross@{xi:g}"] = [F_limit(s, spec) for s in ss]
        else:
            spec = LimitKernel(family=fam)
            cols[f"F_{fam}"] = [F_limit(s, spec) for s in ss]
    header = ["s"] + list(cols)
    rows = [[s] + [cols[c][i] for c in cols] for i, s in enumerate(ss)]
    _write_csv(out, header, rows)
    _write_manifest(man, {k: v for k, v in vars(args).items() if k != "func"})
    print(f"wrote {out}")
    return 0


# -- verify -------------------------------------------------------------------

def _suite_symfunc(fast):
    from .symfunc import (verify_schur_hl_identity, verify_rogers_szego_expansion,
                          littlewood_sum_truncated, pi_normalization)
    ok = True
    rep = verify_schur_hl_identity(2 if fast else 3, 2, 5 if fast else 6, 8 if fast else 10)
    print(" ", rep)
    ok &= rep.ok
    for n in range(5):
        ok &= verify_rogers_szego_expansion(n, 10)
    print("   rogers-szego expansion n<=4: ok")
    q, t, nu = Fraction(1, 3), Fraction(1, 4), Fraction(2)
    a = (Fraction(2, 5), Fraction(1, 4))
    diff = abs(float(littlewood_sum_truncated(a, q, t, nu, 24)
                     - pi_normalization(a, q, t, nu)))
    print(f"   littlewood truncation defect: {diff:.2e}")
    ok &= diff < 1e-8
    return ok


def _suite_lattice(fast):
    from .lattice import (verify_boundary_exchange, verify_yb_exchange,
                          verify_row_is_skew_hl)
    q, t, nu, a = Fraction(1, 3), Fraction(1, 5), Fraction(3), Fraction(1, 7)
    ok = True
    rep = verify_boundary_exchange((q, t, nu, a), n_cap=2 if fast else 3)
    print(" ", rep)
    ok &= rep.ok
    rep = verify_yb_exchange((Fraction(1, 3), Fraction(1, 5), Fraction(2, 7)),
                             occ_cap=1 if fast else 2)
    print(" ", rep)
    ok &= rep.ok
    for lam, mu in [((2,), (1,)), ((3, 1), (2,)), ((2, 2), (2, 1))]:
        for pal in (1, 2):
            rep = verify_row_is_skew_hl(lam, mu, Fraction(2, 5), Fraction(1, 3), pal)
            ok &= rep.ok
    print("   boson rows vs skew HL: ok")
    return ok


def _suite_measures(fast):
    from .measures import rs_pmf, rs_inverse_pmf, theta_pmf
    ok = True
    for (q, t) in [(0.4, 0.2), (0.3, 0.55)]:
        p = rs_pmf(q, t)
        inv = rs_inverse_pmf(q, t)
        conv = p.convolve(inv)
        err = max(abs(conv(k) - (1.0 if k == 0 else 0.0)) for k in range(-3, 60))
        print(f"   rs * rs_inverse = delta at (q,t)=({q},{t}): err {err:.1e}")
        ok &= err < 1e-12
        ok &= abs(p.total - 1) < 1e-10
    ok &= abs(theta_pmf(0.6, 0.5).total - 1) < 1e-12
    return ok


def _suite_pfaffian(fast):
    import numpy as np
    from .pfaffian import pfaffian, pfaffian_matching
    rng = np.random.default_rng(0)
    ok = True
    for dim in (4, 6, 8):
        m = rng.standard_normal((dim, dim))
        m = m - m.T
        d1, d2 = pfaffian(m), pfaffian_matching(m)
        ok &= abs(d1 - d2) < 1e-9 * max(1, abs(d2))
        ok &= abs(d1 ** 2 - np.linalg.det(m)) < 1e-8 * max(1, abs(np.linalg.det(m)))
    print("   pfaffian vs matching expansion and det: ok")
    from .pfaffian import qmoment_contour, HeightKernel, fredholm_pfaffian_cdf
    from .lattice import SixVertexParams, enumerate_height_joint
    params = SixVertexParams(Fraction(3, 10), Fraction(1, 4), Fraction(3, 2),
                             (Fraction(1, 5), Fraction(7, 20)))
    exact = float(enumerate_height_joint(
        2, params, lambda top: Fraction(3, 10) ** (-sum(top[x][1] for x in range(2)))))
    got = qmoment_contour(2, 2, 1, 0.3, 0.25, 1.5, (0.2, 0.35))
    print(f"   q-moment k=1 vs enumeration: err {abs(got - exact):.1e}")
    ok &= abs(got - exact) < 1e-7
    return ok


def _suite_limits(fast):
    from .limits import LimitKernel, F_limit
    ok = True
    for fam in ("gse", "goe"):
        spec = LimitKernel(family=fam)
        vals = [F_limit(s, spec) for s in (-4, -2, 0, 2, 4)]
        mono = all(b > a for a, b in zip(vals, vals[1:]))
        print(f"   F_{fam} monotone on grid: {mono}")
        ok &= mono
    return ok


_SUITES = {
    "symfunc": _suite_symfunc,
    "lattice": _suite_lattice,
    "yangbaxter": _suite_lattice,
    "measures": _suite_measures,
    "pfaffian": _suite_pfaffian,
    "limits": _suite_limits,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    names = list(dict.fromkeys(names))
    if any(n not in _SUITES for n in names):
        print(f"unknown suite {args.suite!r}; choose from {sorted(set(_SUITES))} or all",
              file=sys.stderr)
        return 2
    all_ok = True
    for name in names:
        print(f"[{name}]")
        ok = _SUITES[name](args.fast)
        print(f"  -> {'PASS' if ok else 'FAIL'}")
        all_ok &= ok
    return 0 if all_ok else 1


# -- converge -----------------------------------------------------------------

def cmd_converge(args) -> int:
    from .limits import LimitKernel, F_limit
    from .pfaffian import HeightKernel, fredholm_pfaffian_cdf
    from scipy.stats import norm

    out, man = _out_paths(args.out)
    sizes = [int(x) for x in args.sizes.split(",")]
    a, q, t, nu, zeta = args.a, args.q, args.t, args.nu, args.zeta
    ss = np.arange(args.u_min, args.u_max + 1e-9, args.u_step)
    if nu > 1:
        ref_name, spec = "gse", LimitKernel(family="gse")
        ref = lambda u: F_limit(u, spec)
    elif nu == 1:
        ref_name, spec = "goe", LimitKernel(family="goe")
        ref = lambda u: F_limit(u, spec)
    else:
        ref_name = "gaussian"
        ref = lambda u: norm.cdf(u)
    rows = []
    for n in sizes:
        if nu >= 1:
            mu = 2 * a / (1 + a)
            sig = (a * (1 - a)) ** (1 / 3) / (1 + a) * n ** (1 / 3)
        else:
            mu = (2 * a * a + a * (nu + 1 / nu)) / ((1 + a * nu) * (1 + a / nu))
            sig = math.sqrt(a * (1 - a * a) * (1 / nu - nu)
                            / ((1 + a * nu) ** 2 * (1 + a / nu) ** 2)) * math.sqrt(n)
        kern = HeightKernel("sixvertex", q=q, t=t, nu=nu, zeta=zeta, n=n, a=a,
                            nodes=args.nodes)
        sup = 0.0
        for u in ss:
            s = int(round(mu * n + sig * u))
            val, _ = fredholm_pfaffian_cdf(kern, s)
            uu = (s - mu * n) / sig
            sup = max(sup, abs(val - ref(uu)))
        rows.append((n, sup))
        print(f"n={n}: sup-distance to {ref_name} = {sup:.5f}")
    _write_csv(out, ["n", f"sup_distance_{ref_name}"], rows)
    _write_manifest(man, {k: v for k, v in vars(args).items() if k != "func"})
    decreasing = all(b[1] < a[1] for a, b in zip(rows, rows[1:]))
    print(f"monotone decrease: {decreasing}")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="halfspace",
                                description="half-space six-vertex / ASEP toolkit")
    p.add_argument("--config", help="JSON file with defaults for the subcommand")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="Monte Carlo batches")
    s.add_argument("--model", required=True, choices=["asep", "sixvertex"])
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--nu", type=float)
    s.add_argument("--tau", type=float, default=20.0)
    s.add_argument("--n", type=int, default=32)
    s.add_argument("--a", type=float, default=0.4)
    s.add_argument("--samples", type=int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int)
    s.add_argument("--out", default="simulate.csv")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("pfaffian-cdf", help="window Fredholm Pfaffian cdf table")
    s.add_argument("--model", required=True, choices=["asep", "sixvertex"])
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--nu", type=float, required=True)
    s.add_argument("--a", type=float, default=0.4)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--tau", type=float, default=20.0)
    s.add_argument("--zeta", type=float, default=0.6)
    s.add_argument("--nodes", type=int, default=512)
    s.add_argument("--s-min", type=int, default=-6)
    s.add_argument("--s-max", type=int, default=12)
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--out", default="pfaffian_cdf.csv")
    s.set_defaults(func=cmd_pfaffian_cdf)

    s = sub.add_parser("limit", help="limit distribution tables")
    s.add_argument("--dist", default="gse,goe")
    s.add_argument("--xi", default="")
    s.add_argument("--s-min", type=float, default=-5.0)
    s.add_argument("--s-max", type=float, default=3.0)
    s.add_argument("--s-step", type=float, default=0.25)
    s.add_argument("--out", default="limits.csv")
    s.set_defaults(func=cmd_limit_table)

    s = sub.add_parser("verify", help="run invariant suites")
    s.add_argument("--suite", default="all")
    s.add_argument("--fast", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("converge", help="rescaled-cdf convergence study")
    s.add_argument("--model", default="sixvertex", choices=["sixvertex"])
    s.add_argument("--q", type=float, default=0.3)
    s.add_argument("--t", type=float, default=0.2)
    s.add_argument("--nu", type=float, required=True)
    s.add_argument("--a", type=float, default=0.4)
    s.add_argument("--zeta", type=float, default=0.6)
    s.add_argument("--sizes", default="100,200,400")
    s.add_argument("--u-min", type=float, default=-3.0)
    s.add_argument("--u-max", type=float, default=1.0)
    s.add_argument("--u-step", type=float, default=1.0)
    s.add_argument("--nodes", type=int, default=512)
    s.add_argument("--out", default="converge.csv")
    s.set_defaults(func=cmd_converge)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as f:
            defaults = json.load(f)
        for k, v in defaults.items():
            if getattr(args, k, None) in (None,) or k not in vars(args):
                setattr(args, k, v)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"invalid parameters: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
