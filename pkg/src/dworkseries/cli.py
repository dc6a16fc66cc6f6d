"""Command line front end: ``python -m dworkseries <command> <config>``.

Config files are line oriented ``key = value`` text::

    prime = 3
    dimension = 2
    a0 = 1 1
    point = 2 0
    point = 0 2
    degree = 9        # total degree bound in t
    weight = 4        # weight bound D_x for the operator
    precision = 3     # K, may be a fraction such as 5/2

``point`` repeats once per a_1..a_N.  There are no defaults for the prime
or the bounds.  Optional keys: ``allow_p2``, ``format``, ``cache_dir``.
The name of a bundled fixture (dwork2, dwork3, hexagon, segment) can be
given instead of a path.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import congruence as cg
from .dwork import (DworkOperator, NonContractionError, SElement, bmu_polynomial,
                    boyarsky_check, eigen_check, g_identity_check, theta_coeffs)
from .hypergeom import phi1_series, phi_series
from .lattice import (GateFailure, GeometryError, PointConfiguration,
                      interior_lattice_points, unique_interior_gate)
from .padic import INF, PrecisionError, is_prime
from .series import PiAdicRing, TruncatedSeries

log = logging.getLogger("dworkseries")

CACHE_ENV = "DWORKSERIES_CACHE_DIR"
FIXTURES = ("dwork2", "dwork3", "hexagon", "segment")
COMMANDS = ("check-gate", "phi", "phi1", "b-table", "bmu", "alpha", "fixpoint",
            "eigen", "verify", "specialize", "report")


class ConfigError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class ProblemConfig:
    prime: int
    dimension: int
    rows: tuple
    degree: int
    weight: int
    precision: Fraction
    allow_p2: bool = False
    format: str = "text"
    cache_dir: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def configuration(self) -> PointConfiguration:
        return PointConfiguration(self.rows)

    def to_text(self) -> str:
        out = [f"prime = {self.prime}", f"dimension = {self.dimension}",
               "a0 = " + " ".join(map(str, self.rows[0]))]
        out += ["point = " + " ".join(map(str, r)) for r in self.rows[1:]]
        out += [f"degree = {self.degree}", f"weight = {self.weight}",
                f"precision = {self.precision}"]
        if self.allow_p2:
            out.append("allow_p2 = true")
        if self.format != "text":
            out.append(f"format = {self.format}")
        if self.cache_dir:
            out.append(f"cache_dir = {self.cache_dir}")
        return "\n".join(out) + "\n"


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_config(text: str) -> ProblemConfig:
    """Parse and validate; every problem found is reported at once."""
    problems = []
    single = {}
    points = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value'")
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        if key == "point":
            points.append((lineno, val))
        elif key in single:
            problems.append(f"line {lineno}: duplicate key {key!r}")
        else:
            single[key] = (lineno, val)

    def integer(key, positive=True):
        if key not in single:
            problems.append(f"missing key {key!r}")
            return None
        lineno, val = single[key]
        try:
            v = int(val)
        except ValueError:
            problems.append(f"line {lineno}: {key} must be an integer, got {val!r}")
            return None
        if positive and v <= 0:
            problems.append(f"line {lineno}: {key} must be positive, got {v}")
        return v

    def row(lineno, val):
        try:
            return tuple(int(x) for x in val.split())
        except ValueError:
            problems.append(f"line {lineno}: point coordinates must be integers")
            return None

    allowed = {"prime", "dimension", "a0", "degree", "weight", "precision",
               "allow_p2", "format", "cache_dir"}
    for key, (lineno, _) in single.items():
        if key not in allowed:
            problems.append(f"line {lineno}: unknown key {key!r}")

    allow_p2 = False
    if "allow_p2" in single:
        lineno, val = single["allow_p2"]
        if val.lower() not in _BOOL:
            problems.append(f"line {lineno}: allow_p2 must be true or false")
        else:
            allow_p2 = _BOOL[val.lower()]

    p = integer("prime")
    if p is not None and p > 0:
        if not is_prime(p):
            problems.append(f"prime = {p} is not prime")
        elif p == 2 and not allow_p2:
            problems.append("prime = 2 is excluded: the construction needs an odd prime "
                            "(set allow_p2 = true for the experimental mod-2 check)")
    n = integer("dimension")
    degree = integer("degree")
    weight = integer("weight")

    precision = None
    if "precision" not in single:
        problems.append("missing key 'precision'")
    else:
        lineno, val = single["precision"]
        try:
            precision = Fraction(val)
            if precision <= 0:
                problems.append(f"line {lineno}: precision must be positive")
        except ValueError:
            problems.append(f"line {lineno}: precision must be a rational like 3 or 5/2")

    rows = []
    if "a0" not in single:
        problems.append("missing key 'a0'")
    else:
        rows.append((single["a0"][0], row(*single["a0"])))
    rows += [(ln, row(ln, v)) for ln, v in points]
    if len(rows) < 2:
        problems.append("need a0 and at least one point")
    if n is not None:
        bad = [ln for ln, r in rows if r is not None and len(r) != n]
        if bad:
            problems.append(f"rows on lines {bad} do not have {n} coordinates")
    seen = {}
    for ln, r in rows[1:]:
        if r is not None and r in seen:
            problems.append(f"line {ln}: point {r} repeats line {seen[r]}")
        elif r is not None:
            seen[r] = ln

    fmt = single.get("format", (0, "text"))[1]
    if fmt not in ("text", "structured"):
        problems.append(f"format must be text or structured, got {fmt!r}")

    if problems:
        raise ConfigError(problems)
    return ProblemConfig(p, n, tuple(r for _, r in rows), degree, weight, precision,
                         allow_p2, fmt, single.get("cache_dir", (0, None))[1])


def read_config_text(source: str) -> str:
    path = Path(source)
    if not path.exists() and source in FIXTURES:
        return resources.files("dworkseries").joinpath("fixtures", f"{source}.cfg").read_text()
    return path.read_text()


def load_config(source: str) -> ProblemConfig:
    return parse_config(read_config_text(source))


# -- cache --------------------------------------------------------------------

class Cache:
    """Write-once text entries, each stored with a sha256 of its body."""

    def __init__(self, directory):
        self.dir = Path(directory) if directory else None

    @staticmethod
    def key(kind: str, **fields) -> str:
        blob = json.dumps({"kind": kind, **fields}, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key):
        return self.dir / f"{key}.txt"

    def get(self, key: str):
        if self.dir is None:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        head, _, body = path.read_text().partition("\n")
        if head != "# sha256 " + hashlib.sha256(body.encode()).hexdigest():
            log.warning("cache entry %s is corrupt; recomputing", path.name)
            return None
        return body

    def put(self, key: str, body: str):
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text("# sha256 " + hashlib.sha256(body.encode()).hexdigest() + "\n" + body)
        os.replace(tmp, path)

    def fetch(self, key: str, compute):
        body = self.get(key)
        if body is None:
            body = compute()
            self.put(key, body)
        return body


def kernel_to_text(table: dict) -> str:
    parts = []
    for mu in sorted(table, key=lambda m: (m[0], m)):
        parts.append("## mu = " + " ".join(map(str, mu)))
        parts.append(table[mu].to_text())
    return "\n".join(parts) + "\n"


def kernel_from_text(text: str, p: int) -> dict:
    ring = PiAdicRing(p)
    out = {}
    for block in text.split("## mu = ")[1:]:
        head, _, body = block.partition("\n")
        out[tuple(int(x) for x in head.split())] = TruncatedSeries.from_text(body, ring)
    return out


def cached_operator(cfg: ProblemConfig, cache: Cache) -> DworkOperator:
    op = DworkOperator(cfg.configuration, cfg.prime, cfg.weight, cfg.degree)
    key = Cache.key("kernel", p=cfg.prime, points=cfg.rows, weight=cfg.weight,
                    degree=cfg.degree)
    text = cache.fetch(key, lambda: kernel_to_text(op.kernel))
    op._kernel = kernel_from_text(text, cfg.prime)
    return op


# -- output helpers -------------------------------------------------------------

def _series_payload(s: TruncatedSeries) -> dict:
    return {"nvars": s.nvars, "degree": s.degree, "ring": s.ring.name,
            "terms": [[list(e), s.ring.to_text(c)]
                      for e, c in sorted(s.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))]}


def _element_payload(x: SElement) -> dict:
    return {"p": x.p, "components": [{"rho": list(r), "series": _series_payload(x[r])}
                                     for r in x.support()]}


def _val(v):
    return "inf" if v == INF else str(Fraction(v))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- commands ---------------------------------------------------------------------

def cmd_check_gate(cfg, args, cache):
    config = cfg.configuration
    pts = interior_lattice_points(config)
    ok = pts == [config.a0]
    if args.format == "structured":
        return _dump({"check": "gate", "interior_points": [list(x) for x in pts],
                      "a0": list(config.a0), "pass": ok}), ok
    if ok:
        return f"gate: PASS, unique interior point {config.a0}", True
    return f"gate: FAIL, interior points {pts}, a0 = {config.a0}", False


def _series_cmd(s, args):
    if args.format == "structured":
        return _dump(_series_payload(s)), True
    return s.to_text(), True


def cmd_phi(cfg, args, cache):
    return _series_cmd(phi_series(cfg.configuration, cfg.degree), args)


def cmd_phi1(cfg, args, cache):
    return _series_cmd(phi1_series(cfg.configuration, cfg.prime), args)


def cmd_b_table(cfg, args, cache):
    p = cfg.prime
    unique_interior_gate(cfg.configuration)
    size = p * cfg.weight
    theta_key = Cache.key("theta", p=p, size=size)
    theta_text = cache.fetch(theta_key, lambda: _theta_text(p, size))
    op = cached_operator(cfg, cache)
    if args.format == "structured":
        return _dump({"theta": theta_text.splitlines(),
                      "kernel": [{"mu": list(m), "series": _series_payload(op.kernel[m])}
                                 for m in sorted(op.kernel, key=lambda m: (m[0], m))]}), True
    return "# theta\n" + theta_text + "\n# kernel\n" + kernel_to_text(op.kernel), True


def _theta_text(p, size):
    t = theta_coeffs(p, size)
    return "\n".join(f"{i} : {t[i].to_text()}" for i in range(size + 1))


def cmd_bmu(cfg, args, cache):
    if not args.mu:
        raise SystemExit("bmu needs --mu, e.g. --mu '2 2 2'")
    mu = tuple(int(x) for x in args.mu.replace(",", " ").split())
    theta = theta_coeffs(cfg.prime, mu[0])
    b = bmu_polynomial(cfg.configuration, mu, theta, degree=cfg.degree)
    if args.format == "structured":
        return _dump({"mu": list(mu), "in_M": not b.empty,
                      "series": _series_payload(b.poly)}), True
    head = f"# mu = {mu}" + ("" if not b.empty else "  (not in M: zero polynomial)")
    return head + "\n" + b.poly.to_text(), True


def cmd_alpha(cfg, args, cache):
    op = cached_operator(cfg, cache)
    xi = op.explicit_eigenvector() if args.input == "explicit" else op.seed()
    res = op.alpha_star(xi)
    if args.format == "structured":
        return _dump({"input": args.input, "result": _element_payload(res.element),
                      "tails": {str(k): _val(v) for k, v in sorted(res.tails.items())}}), True
    tails = ", ".join(f"weight {k}: {_val(v)}" for k, v in sorted(res.tails.items()))
    return f"# input: {args.input}\n# tail valuations: {tails}\n" + res.element.to_text(), True


def cmd_fixpoint(cfg, args, cache):
    op = cached_operator(cfg, cache)
    try:
        fp = op.iterate_to_fixed_point(precision=cfg.precision + 1, max_iters=args.max_iters)
    except NonContractionError as exc:
        return f"fixpoint: FAIL, {exc}", False
    ref = cg.normalize_by_slot(op.explicit_eigenvector(), op.a0_hat)
    agree = (fp.element - ref).valuation()
    ok = agree >= cfg.precision
    if args.format == "structured":
        return _dump({"decay": [_val(d) for d in fp.decay],
                      "contraction_ratio": fp.contraction_ratio,
                      "agreement_with_explicit": _val(agree),
                      "tolerance": _val(cfg.precision), "pass": ok}), ok
    lines = ["step  difference valuation"]
    lines += [f"{i + 1:>4}  {_val(d)}" for i, d in enumerate(fp.decay)]
    lines.append(f"measured contraction ratio: {fp.contraction_ratio:.6g}")
    lines.append(f"agreement with explicit / Phi: {_val(agree)} (need {cfg.precision})")
    lines.append("fixpoint: " + ("PASS" if ok else "FAIL"))
    return "\n".join(lines), ok


def _eigen(cfg, cache):
    op = cached_operator(cfg, cache)
    margin, tol = eigen_check(op, precision=cfg.precision)
    return cg.Check(f"alpha*(xi) == p xi (D_x={cfg.weight}, degree<={cfg.degree})",
                    margin, tol, margin >= tol,
                    cg.inputs_digest(cfg.configuration, cfg.prime, weight=cfg.weight,
                                     degree=cfg.degree, precision=str(cfg.precision)))


def cmd_eigen(cfg, args, cache):
    r = cg.CongruenceReport([_eigen(cfg, cache)])
    return r.render(args.format), r.passed


def cmd_verify(cfg, args, cache):
    r = cg.full_report(cfg.configuration, cfg.prime, cfg.degree, cfg.weight,
                       allow_p2=cfg.allow_p2)
    return r.render(args.format), r.passed


def cmd_specialize(cfg, args, cache):
    if not args.values:
        raise SystemExit("specialize needs --values, e.g. --values '1 2'")
    values = tuple(int(x) for x in args.values.replace(",", " ").split())
    sp = cg.Specialization(cfg.prime, values, args.power)
    degrees = [int(x) for x in args.degrees.split(",")] if args.degrees else \
        [cfg.degree, 2 * cfg.degree, 3 * cfg.degree]
    r = cg.CongruenceReport()
    try:
        r.add(cg.specialize_and_check(cfg.configuration, sp, degrees))
        ok = r.passed
    except cg.OutsideDomainError as exc:
        r.add(cg.rejection_check(cfg.configuration, sp))
        log.error("outside the unit domain of Phi_1: %s", exc)
        ok = False
    return r.render(args.format), ok


def cmd_report(cfg, args, cache):
    config = cfg.configuration
    r = cg.full_report(config, cfg.prime, cfg.degree, cfg.weight, allow_p2=cfg.allow_p2)
    if cfg.prime != 2:
        r.add(_eigen(cfg, cache))
        op = cached_operator(cfg, cache)
        try:
            fp = op.iterate_to_fixed_point(precision=cfg.precision + 1)
            ref = cg.normalize_by_slot(op.explicit_eigenvector(), op.a0_hat)
            agree = (fp.element - ref).valuation()
            r.add(cg.Check("beta fixed point == explicit / Phi", agree, cfg.precision,
                           agree >= cfg.precision and fp.contraction_ratio < 1,
                           details={"decay": [_val(d) for d in fp.decay]}))
        except NonContractionError as exc:
            r.add(cg.Check("beta fixed point == explicit / Phi", None, cfg.precision, False,
                           details={"error": str(exc)}))
        K = cfg.precision
        rows = g_identity_check(cfg.prime, 8, K)
        m = min(row.margin for row in rows)
        r.add(cg.Check(f"H == p G coefficients, l <= 8 (p={cfg.prime})", m, K, m >= K))
        sums = boyarsky_check(cfg.prime, 12)
        r.add(cg.Check(f"Boyarsky partial sums, M = 12 (p={cfg.prime})", sums[-1][2], K,
                       sums[-1][2] >= K))
    return r.render(args.format), r.passed


HANDLERS = {
    "check-gate": cmd_check_gate, "phi": cmd_phi, "phi1": cmd_phi1,
    "b-table": cmd_b_table, "bmu": cmd_bmu, "alpha": cmd_alpha,
    "fixpoint": cmd_fixpoint, "eigen": cmd_eigen, "verify": cmd_verify,
    "specialize": cmd_specialize, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="python -m dworkseries",
                                 description="Exact Dwork-operator and congruence checks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("config", help="config file or bundled fixture name")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--degree", type=int, help="override the total degree bound")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("text", "structured"))
    ap.add_argument("--allow-p2", action="store_true",
                    help="experimental: run only the mod-2 congruence")
    ap.add_argument("--cache-dir", help=f"cache directory (default ${CACHE_ENV})")
    ap.add_argument("--mu", help="cone point for bmu")
    ap.add_argument("--input", choices=("seed", "explicit"), default="seed")
    ap.add_argument("--values", help="integer values of t_1..t_N for specialize")
    ap.add_argument("--power", type=int, default=1, help="modulus p^power for specialize")
    ap.add_argument("--degrees", help="comma separated truncations for specialize")
    ap.add_argument("--max-iters", type=int, default=50)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _apply_overrides(text_cfg: str, args) -> ProblemConfig:
    # the prime is folded into the text so the p = 2 rule is validated once
    lines = text_cfg.splitlines()
    if args.prime is not None:
        lines = [ln for ln in lines if ln.split("=", 1)[0].strip() != "prime"]
        lines.append(f"prime = {args.prime}")
    if args.allow_p2:
        lines = [ln for ln in lines if ln.split("=", 1)[0].strip() != "allow_p2"]
        lines.append("allow_p2 = true")
    cfg = parse_config("\n".join(lines))
    if args.degree is not None:
        if args.degree < 0:
            raise ConfigError([f"--degree must be >= 0, got {args.degree}"])
        cfg.degree = args.degree
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _apply_overrides(read_config_text(args.config), args)
    except ConfigError as exc:
        for prob in exc.problems:
            print(f"config error: {prob}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    args.format = args.format or cfg.format
    cache = Cache(args.cache_dir or os.environ.get(CACHE_ENV) or cfg.cache_dir)
    if cfg.prime == 2 and args.command not in ("verify", "check-gate", "phi", "phi1"):
        print("p = 2 supports only check-gate, phi, phi1 and verify", file=sys.stderr)
        return 2
    try:
        text, ok = HANDLERS[args.command](cfg, args, cache)
    except GateFailure as exc:
        text, ok = f"gate: FAIL, {exc}", False
    except (GeometryError, PrecisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if ok else 1
