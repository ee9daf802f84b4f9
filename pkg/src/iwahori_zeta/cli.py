"""Command line front end: ``iwahori-zeta verify ...`` and ``iwahori-zeta table ...``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
configuration error (bad prime, bad discriminant, no inert pairing).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .quadratic import ConfigError, derive_params, is_inert
from .report import SKIPPED, VerifyReport

TARGETS = ("cosets", "volumes", "bessel", "whittaker", "zeta")
CASES = ("unram-st", "st-st", "st-unram")
MAX_ENUMERATION_PRIME = 5


@dataclass
class RunConfig:
    command: str
    target: str
    ps: list
    ds: list
    lmax: int = 4
    mmax: int = 4
    order: int = 40
    aps: list = field(default_factory=lambda: [1, -1])
    wps: list = field(default_factory=lambda: [1, -1])
    cases: list = field(default_factory=lambda: list(CASES))
    out: str | None = None
    fmt: str = "json"
    workers: int = 1
    timing: bool = False
    mode: str = "corrected"
    params: dict = field(default_factory=dict)   # (p, d) -> DiscParams or None if not inert

    def inert_params(self, p):
        return [(d, self.params[(p, d)]) for d in self.ds if self.params[(p, d)] is not None]

    def as_dict(self):
        return {"target": self.target, "p": self.ps, "d": self.ds, "lmax": self.lmax,
                "mmax": self.mmax, "order": self.order, "ap": self.aps, "wp": self.wps,
                "case": self.cases, "mode": self.mode}


def _is_prime(n):
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def validate(cfg):
    """Fill cfg.params; raise ConfigError on anything unusable."""
    for p in cfg.ps:
        if not _is_prime(p) or p == 2:
            raise ConfigError(f"p must be an odd prime, got {p}")
    for d in cfg.ds:
        if d <= 0 or d % 4 not in (0, 3):
            raise ConfigError(f"-{d} is not a discriminant (need d > 0, d = 0 or 3 mod 4)")
    for v in cfg.aps + cfg.wps:
        if v not in (1, -1):
            raise ConfigError("signs must be 1 or -1")
    if cfg.lmax < 0 or cfg.mmax < 0 or cfg.order < 10:
        raise ConfigError("need lmax, mmax >= 0 and order >= 10")
    for p in cfg.ps:
        for d in cfg.ds:
            cfg.params[(p, d)] = derive_params(d, p) if is_inert(d, p) else None
        if not cfg.inert_params(p):
            raise ConfigError(f"p={p} is inert for none of d={cfg.ds}")
    if cfg.command == "verify" and cfg.target == "cosets":
        big = [p for p in cfg.ps if p > MAX_ENUMERATION_PRIME]
        if big:
            raise ConfigError(f"coset enumeration is limited to p <= {MAX_ENUMERATION_PRIME}")
    return cfg


# ---------------------------------------------------------------- jobs


def _skipped(check, params, reason):
    r = VerifyReport(check, params, status=SKIPPED)
    r.notes.append(reason)
    return r


def build_jobs(cfg):
    """Picklable (function name, kwargs) pairs in a fixed order."""
    targets = TARGETS if cfg.target == "all" else (cfg.target,)
    ls, ms = list(range(cfg.lmax + 1)), list(range(cfg.mmax + 1))
    jobs = []
    for target in targets:
        for p in cfg.ps:
            pairs = [(d, cfg.params[(p, d)]) for d in cfg.ds]
            if target == "cosets":
                if p > MAX_ENUMERATION_PRIME:
                    jobs.append(("skip", {"check": "cosets", "params": {"p": p},
                                          "reason": "enumeration limited to p <= 5"}))
                    continue
                jobs.append(("cosets_distinct", {"p": p}))
                jobs.append(("cosets_complete", {"p": p}))
            for d, prm in pairs:
                if target in ("zeta",) or (target == "bessel" and d != cfg.ds[0]):
                    continue
                if prm is None and target != "bessel":
                    jobs.append(("skip", {"check": target, "params": {"p": p, "d": d},
                                          "reason": f"p={p} is not inert for d={d}"}))
                    continue
                if target == "cosets":
                    jobs.append(("cosets_claims", {"p": p, "d": d, "ls": ls, "ms": ms,
                                                   "mode": cfg.mode}))
                elif target == "volumes":
                    jobs.append(("volumes", {"p": p, "d": d, "ls": ls, "ms": ms,
                                             "mode": cfg.mode}))
                elif target == "whittaker":
                    for case in cfg.cases:
                        for a in cfg.aps:
                            jobs.append(("whittaker", {"p": p, "d": d, "case": case, "a_p": a,
                                                       "ls": ls, "ms": ms, "mode": cfg.mode}))
            if target == "bessel":
                for w in cfg.wps:
                    jobs.append(("bessel_certify", {"p": p, "w": w, "L": cfg.lmax,
                                                    "M": max(cfg.mmax, 1)}))
                d, prm = next((d, prm) for d, prm in pairs if prm is not None)
                jobs.append(("bessel_identities", {"p": p, "d": d, "ls": ls, "ms": ms,
                                                   "mode": cfg.mode}))
            if target == "zeta":
                from .zeta import sign_combinations
                for case in cfg.cases:
                    for a, w in sign_combinations(case):
                        if _sign_selected(case, a, w, cfg):
                            jobs.append(("zeta", {"p": p, "case": case, "a_p": a, "w_p": w,
                                                  "order": cfg.order}))
    return jobs


def _sign_selected(case, a, w, cfg):
    if case == "unram-st":
        return a in cfg.aps
    if case == "st-unram":
        return w in cfg.wps
    return a in cfg.aps and w in cfg.wps


def run_job(job):
    name, kw = job
    if name == "skip":
        return _skipped(kw["check"], kw["params"], kw["reason"])
    if name == "cosets_distinct":
        from .cosets import verify_distinct_cosets
        r = verify_distinct_cosets(kw["p"])
        r.notes.append(f"{r.params['representatives']} representatives, "
                       f"{r.params['pairs']} distinct-pair checks")
        return r
    if name == "cosets_complete":
        from .cosets import verify_completeness
        return verify_completeness(kw["p"])
    if name == "cosets_claims":
        from .cosets import verify_claim_identities
        prm = derive_params(kw["d"], kw["p"])
        mode = "corrected" if kw["mode"] == "corrected" else "printed"
        return verify_claim_identities(kw["p"], prm, kw["ls"], kw["ms"], mode)
    if name == "volumes":
        from .volumes import verify_volumes
        return verify_volumes(kw["p"], kw["ls"], kw["ms"], derive_params(kw["d"], kw["p"]),
                              kw["mode"])
    if name == "bessel_certify":
        from .bessel import certify
        return certify(kw["p"], kw["w"], kw["L"], kw["M"])
    if name == "bessel_identities":
        from .bessel import verify_hecke_matrix_identities
        mode = "coset" if kw["mode"] == "corrected" else "printed"
        return verify_hecke_matrix_identities(kw["p"], derive_params(kw["d"], kw["p"]),
                                              kw["ls"], kw["ms"], mode)
    if name == "whittaker":
        from .whittaker import verify_decompositions
        return verify_decompositions(kw["case"], kw["p"], derive_params(kw["d"], kw["p"]),
                                     kw["ls"], kw["ms"], kw["mode"], kw["a_p"])
    if name == "zeta":
        from .zeta import verify_theorem
        return verify_theorem(kw["case"], kw["p"], kw["a_p"], kw["w_p"], kw["order"])
    raise ValueError(name)


def run_verify(cfg):
    jobs = build_jobs(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(j) for j in jobs]
    suite = VerifyReport(f"verify {cfg.target}", cfg.as_dict())
    for r in results:
        suite.add(r)
    return suite


# ---------------------------------------------------------------- tables


def build_table(cfg):
    """Header plus rows of exact strings."""
    from .cosets import cells
    p = cfg.ps[0]
    ls, ms = range(cfg.lmax + 1), range(cfg.mmax + 1)
    rows = []
    if cfg.target == "volumes":
        from .volumes import volume
        header = ["l", "m", "t", "volume"]
        for m in ms:
            for l in ls:
                for i in cells(m):
                    rows.append([l, m, i, str(volume(l, m, i, p))])
        return header, rows
    if cfg.target == "bessel":
        from .bessel import closed_form_table
        header = ["l", "m", "t", "w_p", "value", "terms"]
        for w in cfg.wps:
            for m in ms:
                for l in ls:
                    table = closed_form_table(p, w, l, m)
                    for i in cells(m):
                        v = table[i]
                        rows.append([l, m, i, w, str(v), json.dumps(v.to_json())])
        return header, rows
    if cfg.target == "whittaker":
        from .whittaker import whittaker_value
        header = ["case", "l", "m", "t", "a_p", "value", "terms"]
        for case in cfg.cases:
            for a in cfg.aps:
                for m in ms:
                    for l in ls:
                        for i in cells(m):
                            v = whittaker_value(case, p, l, m, i, a).poly
                            if v.is_zero():
                                continue   # rows off the support are omitted
                            rows.append([case, l, m, i, a, str(v), json.dumps(v.to_json())])
        return header, rows
    raise ConfigError(f"no table for {cfg.target}")


# ---------------------------------------------------------------- output


def _report_rows(report, depth=0):
    yield [depth, report.check, report.effective_status, json.dumps(report.params),
           json.dumps(report.witness) if report.witness is not None else ""]
    for c in report.children:
        yield from _report_rows(c, depth + 1)


def _tsv(header, rows):
    # values never contain tabs or newlines, so no quoting is needed
    return "".join("\t".join(str(x) for x in r) + "\n" for r in [header, *rows])


def format_report(report, fmt, timing=False):
    if fmt == "json":
        return report.to_json(timing) + "\n"
    if fmt == "tsv":
        return _tsv(["depth", "check", "status", "params", "witness"], _report_rows(report))
    return "\n".join(report.lines()) + "\n"


def format_table(header, rows, fmt):
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if fmt == "text":
        return "\n".join("  ".join(str(x) for x in r) for r in [header] + rows) + "\n"
    return _tsv(header, rows)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- argparse


def make_parser():
    parser = argparse.ArgumentParser(prog="iwahori-zeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, default_fmt):
        sp.add_argument("--p", type=int, nargs="+", default=[3, 5])
        sp.add_argument("--d", type=int, nargs="+", default=[4, 7])
        sp.add_argument("--lmax", type=int, default=4)
        sp.add_argument("--mmax", type=int, default=4)
        sp.add_argument("--order", type=int, default=40)
        sp.add_argument("--ap", type=int, nargs="+", default=[1, -1])
        sp.add_argument("--wp", type=int, nargs="+", default=[1, -1])
        sp.add_argument("--case", nargs="+", choices=CASES, default=list(CASES))
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "tsv", "text"), default=default_fmt)
        sp.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("target", choices=TARGETS + ("all",))
    common(v, "json")
    v.add_argument("--mode", choices=("printed", "corrected"), default="corrected",
                   help="check identities as displayed, or with the recorded corrections")
    v.add_argument("--timing", action="store_true", help="include wall-clock millis")
    t = sub.add_parser("table", help="dump a value table")
    t.add_argument("target", choices=("bessel", "volumes", "whittaker"))
    common(t, "tsv")
    return parser


def config_from_args(args):
    return RunConfig(command=args.command, target=args.target, ps=args.p, ds=args.d,
                     lmax=args.lmax, mmax=args.mmax, order=args.order, aps=args.ap,
                     wps=args.wp, cases=args.case, out=args.out, fmt=args.format,
                     workers=args.workers, timing=getattr(args, "timing", False),
                     mode=getattr(args, "mode", "corrected"))


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = validate(config_from_args(args))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if cfg.command == "table":
        header, rows = build_table(cfg)
        _emit(format_table(header, rows, cfg.fmt), cfg.out)
        return 0
    report = run_verify(cfg)
    _emit(format_report(report, cfg.fmt, cfg.timing), cfg.out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
