"""Batch driver: ``ainfty-forge run --config fermat-n3.ini``."""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import __version__, grading, hkr, hochschild, hpl, jacobian, mf
from .superalg import SuperPolynomial, TruncationPolicy, from_terms, serialize

PIPELINES = ("check-square", "mf-check", "minimal-model", "type-a", "hh", "jacobian", "versality")
THREADS_ENV = "AINFTY_FORGE_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    a: int
    terms: tuple  # (coefficient, u-exponents, r-exponents)
    policy: TruncationPolicy
    r_values: tuple
    pipelines: tuple
    hh_lengths: tuple
    out: str | None = None

    @property
    def w(self) -> SuperPolynomial:
        return from_terms(self.n, self.terms)

    def canonical(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "terms": [[_q(c), list(b), list(r)] for c, b, r in self.terms],
            "policy": [self.policy.max_r_order, self.policy.max_u_degree, self.policy.max_length],
            "r_values": [_q(r) for r in self.r_values],
            "pipelines": list(self.pipelines),
            "hh_lengths": list(self.hh_lengths),
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational: {s!r}") from exc


def _ints(s: str, n: int | None = None) -> tuple:
    try:
        out = tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"not an integer list: {s!r}") from exc
    if n is not None and len(out) != n:
        raise ConfigError(f"expected {n} entries in {s!r}")
    if any(x < 0 for x in out):
        raise ConfigError(f"negative exponent in {s!r}")
    return out


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
        run = cp["run"]
        n = int(run["n"])
        a = int(run.get("a", str(n)))
    except (configparser.Error, KeyError, ValueError) as exc:
        raise ConfigError(f"bad [run] section: {exc}") from exc
    if n < 3:
        raise ConfigError("n >= 3 required")
    pipes = tuple(p.strip() for p in run.get("pipelines", "").split(",") if p.strip())
    unknown = [p for p in pipes if p not in PIPELINES]
    if unknown:
        raise ConfigError(f"unknown pipelines: {unknown}")
    terms = []
    if cp.has_section("superpotential"):
        for line in cp["superpotential"].get("terms", "").splitlines():
            if not line.strip():
                continue
            parts = line.split(";")
            if len(parts) != 3:
                raise ConfigError(f"term must be 'coef; u-exponents; r-exponents': {line!r}")
            terms.append((_rational(parts[0]), _ints(parts[1], n), _ints(parts[2], n)))
    tr = cp["truncation"] if cp.has_section("truncation") else {}
    try:
        policy = TruncationPolicy(int(tr.get("max_r_order", 2)), int(tr.get("max_u_degree", 6)),
                                  int(tr.get("max_length", 6)))
    except ValueError as exc:
        raise ConfigError(f"bad [truncation] section: {exc}") from exc
    jac = cp["jacobian"] if cp.has_section("jacobian") else {}
    r_values = tuple(_rational(x) for x in jac.get("r_values", "1/10").split(",") if x.strip())
    hh = cp["hh"] if cp.has_section("hh") else {}
    hh_lengths = _ints(hh.get("lengths", ",".join(str(s) for s in range(n, n + 4))))
    return RunConfig(n, a, tuple(terms), policy, r_values, pipes, hh_lengths, run.get("out"))


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc


def bundled_config(name: str = "fermat-n3") -> str:
    return resources.files("ainfty_forge").joinpath("configs", f"{name}.ini").read_text(encoding="utf-8")


# -- pipelines --

class Context:
    """Lazily computed shared results (the minimal model is used by several pipelines)."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._lock = threading.Lock()
        self._model = None

    def model(self) -> hpl.MinimalModel:
        with self._lock:
            if self._model is None:
                self._model = hpl.minimal_model(self.cfg.w, self.cfg.n, self.cfg.policy, self.cfg.a)
            return self._model


def run_check_square(ctx: Context) -> dict:
    n = ctx.cfg.n
    ok = grading.check_square(n)
    perturbed = grading.check_square(n, q2_d=(0,) * n)
    return {"passed": ok and not perturbed, "square_commutes": ok, "perturbed_rejected": not perturbed}


def run_mf_check(ctx: Context) -> dict:
    cfg = ctx.cfg
    M = mf.build_O0(cfg.w, cfg.n, cfg.a)
    try:
        sq = mf.square(M)
        scalar_ok = sq == cfg.w
        payload = serialize(sq - cfg.w)
    except mf.NotScalar as exc:
        scalar_ok, payload = False, serialize(exc.payload)
    graded = mf.is_graded(M)
    _, rep = mf.endo_dga(M, cap=2)
    return {"passed": scalar_ok and graded and rep["passed"], "square_is_w": scalar_ok, "residual": payload,
            "delta_degree_f1": graded, "endo_dga": rep["violations"]}


def run_minimal_model(ctx: Context) -> dict:
    cfg = ctx.cfg
    mm = ctx.model()
    nu = mm.nu
    mu2_ok = nu.length_part(2) == hochschild.exterior_mu2(cfg.n, cfg.policy, cfg.a)
    rep = hochschild.check_ainf(nu)
    image = hkr.phi(nu.min_length(3))
    hkr_ok = image == cfg.w.truncate(cfg.policy)
    return {"passed": mu2_ok and rep.passed and hkr_ok, "nu2_exterior": mu2_ok, "ainf": rep.passed,
            "ainf_failing_lengths": rep.failing_lengths, "hkr_equals_w": hkr_ok,
            "hkr_residual": serialize(image - cfg.w.truncate(cfg.policy)), "entries": nu.size()}


def run_type_a(ctx: Context) -> dict:
    rep = hkr.type_a_check(ctx.model().nu, ctx.cfg.n)
    return {"passed": rep.passed, "mu2_exterior": rep.mu2_ok, "sign": rep.sign,
            "discrepancy": serialize(rep.discrepancy), "equivariant": rep.equivariant}


def run_hh(ctx: Context) -> dict:
    cfg = ctx.cfg
    n, a = cfg.n, cfg.a
    mu2 = hochschild.exterior_mu2(n, a=a)
    pieces = {}
    ok = True
    for s in cfg.hh_lengths:
        res = hochschild.compute_hh(mu2, total=2, s=s, j=0)
        expected = 1 if s == n else 0
        if s == n and res.dimension == 1:
            image = hkr.phi(res.representatives[0])
            rep_ok = bool(image) and set(image.terms) == {((0,) * n, (1,) * n, 0, 0)}
        else:
            rep_ok = True
        good = res.dimension == expected and rep_ok
        ok &= good
        pieces[f"order0_s{s}"] = {"dimension": res.dimension, "expected": expected, "ok": good}
    res = hochschild.compute_hh(mu2, total=2, s=a, j=1)
    images = sorted(serialize(hkr.phi(r)) for r in res.representatives)
    good = res.dimension == n
    ok &= good
    pieces[f"order1_s{a}"] = {"dimension": res.dimension, "expected": n, "ok": good, "hkr_images": images}
    return {"passed": ok, "pieces": pieces}


def run_jacobian(ctx: Context) -> dict:
    out = {}
    ok = True
    for r in ctx.cfg.r_values:
        try:
            rep = jacobian.hh_ring_check(ctx.cfg.n, r)
            out[_q(r)] = {"passed": rep.passed, "quotient_dimension": rep.quotient_dimension,
                          "nilpotency": rep.nilpotency,
                          "structure_constant": None if rep.structure_constant is None else _q(rep.structure_constant)}
            ok &= rep.passed
        except jacobian.NotIsolated as exc:
            out[_q(r)] = {"passed": False, "error": str(exc)}
            ok = False
    return {"passed": ok, "r_values": out}


def run_versality(ctx: Context) -> dict:
    cfg = ctx.cfg
    mu = ctx.model().nu
    n = cfg.n
    out = {}
    eta1 = hochschild.aut_act(SuperPolynomial.const(n, 2), mu)
    F0 = _sample_diffeo(mu)
    eta2 = hochschild.pushforward(F0, mu)
    ok = True
    for name, eta in (("aut_act", eta1), ("pushforward", eta2)):
        res = hochschild.versality_solve(mu, eta)
        out[name] = {"verified": res.verified, "psi": serialize(res.psi), "steps": res.steps}
        ok &= res.verified
    return {"passed": ok, "cases": out}


def _sample_diffeo(mu: hochschild.HochschildCochain) -> hochschild.HochschildCochain:
    """id plus a few graded degree-f(1) corrections of the lowest available positive r-order."""
    n, a, P = mu.n, mu.a, mu.policy
    for k in range(1, P.max_r_order + 1):
        for s in range(1, P.max_length):
            basis = hochschild.piece_basis(n, a, 1, s, k)
            if basis:
                entries = [(T, c, K0, Fraction(1, i + 2)) for i, (T, c, K0) in enumerate(basis[:3])]
                corr = hochschild.HochschildCochain.from_entries(n, entries, P, a)
                return hochschild.identity_cochain(n, P, a) + corr
    return hochschild.identity_cochain(n, P, a)


RUNNERS = {
    "check-square": run_check_square,
    "mf-check": run_mf_check,
    "minimal-model": run_minimal_model,
    "type-a": run_type_a,
    "hh": run_hh,
    "jacobian": run_jacobian,
    "versality": run_versality,
}


def _run_one(name: str, ctx: Context):
    t0 = time.perf_counter()
    try:
        body = RUNNERS[name](ctx)
    except Exception as exc:  # a crashing pipeline is reported as a failure
        body = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
    body["status"] = "pass" if body.pop("passed") else "fail"
    return name, body, time.perf_counter() - t0


def run(cfg: RunConfig, parallel: bool = False) -> dict:
    ctx = Context(cfg)
    if parallel and len(cfg.pipelines) > 1:
        workers = int(os.environ.get(THREADS_ENV, "0")) or min(4, len(cfg.pipelines))
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda p: _run_one(p, ctx), cfg.pipelines))
    else:
        results = [_run_one(p, ctx) for p in cfg.pipelines]
    canon = json.dumps(cfg.canonical(), sort_keys=True)
    body = {
        "tool": "ainfty-forge",
        "version": __version__,
        "input_hash": hashlib.sha256(canon.encode()).hexdigest(),
        "status": "pass" if all(b["status"] == "pass" for _, b, _ in results) else "fail",
        "pipelines": {name: b for name, b, _ in results},
    }
    timings = {name: round(t, 3) for name, _, t in results}
    return {"report": body, "timings": timings}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ainfty-forge")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run",) + PIPELINES:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI config path, or 'bundled:<name>'")
        p.add_argument("--parallel", action="store_true")
        p.add_argument("--out")
    args = parser.parse_args(argv)
    try:
        if args.config.startswith("bundled:"):
            cfg = parse_config(bundled_config(args.config.split(":", 1)[1]))
        else:
            cfg = load_config(args.config)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.command != "run":
        cfg = RunConfig(cfg.n, cfg.a, cfg.terms, cfg.policy, cfg.r_values, (args.command,), cfg.hh_lengths, cfg.out)
    report = run(cfg, parallel=args.parallel)
    text = dumps(report)
    out = args.out or cfg.out
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for name, body in report["report"]["pipelines"].items():
        print(f"{name}: {body['status']}", file=sys.stderr)
    return 0 if report["report"]["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
