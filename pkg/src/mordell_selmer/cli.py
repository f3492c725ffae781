"""Command-line interface: `mordell-selmer <command> [flags]`.

Every run starts its output with a header recording the run configuration
(JSON-lines: {"config": ...}; csv and text: a "# config: ..." line).

CSV columns
  densities:   m,mu,mu_plus,mu_minus,error
  averages:    X,running_average
  count-forms: sign,X,count,count_over_X
  ratios:      k,place,e
  selmer:      k,isogeny,size,m,class_count,cassels_ok,duality_ok
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from .arith import prime_factors, sixth_power_free_part

COMMANDS = ["selmer", "ratios", "classify", "densities", "euler-r", "averages", "count-forms", "report-rank-bounds", "verify"]
SUITE_NAMES = ["covariants", "local", "cassels", "duality", "densities", "counting"]


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    kmin: int | None = None
    kmax: int | None = None
    isogeny: str = "phi"
    cutoff: int | None = None
    tolerance: float | None = None
    digits: int = 18
    cache_dir: str | None = None
    out: str | None = None
    format: str = "json"
    suite: str | None = None
    sign: str | None = None
    tm: int | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command}")
        needs_k = self.command in ("selmer", "ratios", "classify")
        if needs_k and self.k is None and (self.kmin is None or self.kmax is None):
            raise ValueError("--k or --kmin/--kmax is required")
        if self.k == 0:
            raise ValueError("k must be nonzero")
        if self.kmin is not None and self.kmax is not None and self.kmin > self.kmax:
            raise ValueError("--kmin must not exceed --kmax")
        if self.command == "verify" and self.suite not in SUITE_NAMES:
            raise ValueError(f"verify needs a suite among {SUITE_NAMES}")

    def ks(self) -> list[int]:
        if self.k is not None:
            return [self.k]
        return [k for k in range(self.kmin, self.kmax + 1) if k and sixth_power_free_part(k).m == 1]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mordell-selmer", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("suite", nargs="?", help="suite name for verify: " + ", ".join(SUITE_NAMES))
    p.add_argument("--k", type=int)
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--isogeny", choices=["phi", "phihat"], default="phi")
    p.add_argument("--cutoff", type=int, help="prime cutoff (densities), X bound (averages, count-forms)")
    p.add_argument("--tolerance", type=float)
    p.add_argument("--digits", type=int, default=18)
    p.add_argument("--cache-dir", help="Selmer cache directory (default: $MORDELL_CACHE_DIR)")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--sign", choices=["positive", "negative", "both"])
    p.add_argument("--tm", type=int, help="restrict averages to T_m")
    return p


class _Out:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg, self.stream = cfg, stream
        header = {k: v for k, v in asdict(cfg).items() if v is not None}
        if cfg.format == "json":
            self.json({"config": header})
        else:
            self.stream.write("# config: " + json.dumps(header, sort_keys=True) + "\n")

    def json(self, obj):
        self.stream.write(json.dumps(obj, sort_keys=True, default=str) + "\n")

    def line(self, text: str):
        self.stream.write(text + "\n")

    def emit(self, obj: dict, csv_fields: list[str], text: str):
        if self.cfg.format == "json":
            self.json(obj)
        elif self.cfg.format == "csv":
            self.line(",".join(str(obj.get(f, "")) for f in csv_fields))
        else:
            self.line(text)


def _cache(cfg: RunConfig):
    from .cache import SelmerCache, default_cache_dir

    d = cfg.cache_dir or default_cache_dir()
    return SelmerCache(d) if d else None


# --- commands --------------------------------------------------------------------


def cmd_selmer(cfg, out) -> int:
    from .selmer import selmer_group

    cache = _cache(cfg)
    fields = ["k", "isogeny", "size", "m", "class_count", "cassels_ok", "duality_ok"]
    if cfg.format == "csv":
        out.line(",".join(fields))
    failed = False
    for k in cfg.ks():
        key_k = sixth_power_free_part(k).k0
        rec = cache.get(key_k, cfg.isogeny) if cache is not None else None
        if rec is None or not rec.get("checks"):
            rec = selmer_group(k, cfg.isogeny).to_json()
            if cache is not None:
                cache.put(key_k, cfg.isogeny, rec)
        checks = rec["checks"]
        failed |= checks.get("cassels_ok") is False or checks.get("duality_ok") is False
        row = rec if cfg.format != "csv" else dict(rec, **checks)
        out.emit(row, fields, f"k={rec['k']} {rec['isogeny']}: |Sel| = {rec['size']}, m = {rec['m']}, checks {checks}")
    if cache is not None:
        cache.flush()
    if failed:
        out.json({"diagnostic": "consistency check failed"}) if cfg.format == "json" else out.line("# FAIL")
        return 1
    return 0


def cmd_ratios(cfg, out) -> int:
    from .local import INFINITY, local_ratio_closed, local_ratio_tamagawa

    if cfg.format == "csv":
        out.line("k,place,e")
    failed = False
    for k in cfg.ks():
        k0 = sixth_power_free_part(k).k0
        for p in sorted(set([2, 3] + prime_factors(k0))) + [INFINITY]:
            e = local_ratio_closed(k0, p).e
            rec = {"k": k0, "place": p, "e": e}
            if p != INFINITY:
                rec["e_tamagawa"] = local_ratio_tamagawa(k0, p).e
                failed |= rec["e_tamagawa"] != e
            out.emit(rec, ["k", "place", "e"], f"k={k0} p={p}: c_p = 3^{e}")
    return 1 if failed else 0


def cmd_classify(cfg, out) -> int:
    from .selmer import classify_Tm, place_exponents

    for k in cfg.ks():
        ex = place_exponents(k)
        rec = {"k": sixth_power_free_part(k).k0, "m": classify_Tm(k), "exponents": {str(p): e for p, e in ex.items()}}
        out.emit(rec, ["k", "m"], f"k={rec['k']}: m = {rec['m']} {rec['exponents']}")
    return 0


def cmd_densities(cfg, out) -> int:
    from .densities import tm_densities

    t = tm_densities(range(-4, 5), cfg.cutoff or 10**4)
    flagged = cfg.tolerance is not None and t.error > cfg.tolerance
    if cfg.format == "csv":
        out.stream.write(t.to_csv())
    else:
        for m, a, b, c in t.rows:
            rec = {"m": m, "mu": f"{a:.6f}", "mu_plus": f"{b:.6f}", "mu_minus": f"{c:.6f}", "error": f"{t.error:.2e}"}
            out.emit(rec, [], f"m={m:+d}  mu={a:.6f}  mu+={b:.6f}  mu-={c:.6f}  ±{t.error:.1e}")
    if flagged:
        out.line(f"# error {t.error:.2e} exceeds tolerance {cfg.tolerance}")
        return 1
    return 0


def cmd_euler_r(cfg, out) -> int:
    from .densities import global_r

    g = {k: v for k, v in global_r(cfg.digits).items() if not k.startswith("_")}
    out.emit(g, ["product", "r", "one_plus_r", "one_plus_r_over_3", "error"], f"product = {g['product']}±{g['error']}\nr = {g['r']}")
    return 0


def cmd_averages(cfg, out) -> int:
    from .densities import AcceptableSetSpec, empirical_average

    spec = AcceptableSetSpec(sign=cfg.sign) if cfg.sign else None
    res = empirical_average(cfg.cutoff or 1000, spec, cfg.isogeny, cfg.tm, _cache(cfg))
    if cfg.format == "csv":
        out.line("X,running_average")
        for x, a in res.series:
            out.line(f"{x},{a:.6f}")
    else:
        out.emit(
            {"X": res.X, "count": res.count, "average": res.average, "partial": res.partial, "series": res.series,
             "excluded_torsion": res.excluded_torsion},
            [],
            f"average |Sel_{res.isogeny}| over {res.count} k: {res.average:.4f}",
        )
    return 0


def cmd_count_forms(cfg, out) -> int:
    from .cubic_forms import count_classes

    X = cfg.cutoff or 10**4
    if cfg.format == "csv":
        out.line("sign,X,count,count_over_X")
    for sign in ("+", "-"):
        n = count_classes(X, sign, irreducible_only=True)
        rec = {"sign": sign, "X": X, "count": n, "count_over_X": f"{n / X:.6f}"}
        out.emit(rec, ["sign", "X", "count", "count_over_X"], f"disc {sign}: {n} irreducible classes, N/X = {n / X:.4f}")
    return 0


def cmd_rank_bounds(cfg, out) -> int:
    from .densities import rank_bound_report

    rep = rank_bound_report(cfg.cutoff or 10**4, cfg.tolerance or 1e-3)
    if cfg.format == "text":
        for k, v in rep.items():
            out.line(f"{k}: {v}")
    else:
        out.json(rep)
    ok = all(v for k, v in rep.items() if k.endswith("_certified"))
    return 0 if ok else 1


def cmd_verify(cfg, out) -> int:
    from .verify import run_suite

    results = run_suite(cfg.suite)
    for r in results:
        if cfg.format == "json":
            out.json(r.to_json())
        else:
            out.line(r.line())
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {
    "selmer": cmd_selmer,
    "ratios": cmd_ratios,
    "classify": cmd_classify,
    "densities": cmd_densities,
    "euler-r": cmd_euler_r,
    "averages": cmd_averages,
    "count-forms": cmd_count_forms,
    "report-rank-bounds": cmd_rank_bounds,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(ns).items()})
        cfg.validate()
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    stream = open(cfg.out, "w") if cfg.out else sys.stdout
    try:
        return HANDLERS[cfg.command](cfg, _Out(cfg, stream))
    finally:
        if cfg.out:
            stream.close()


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
