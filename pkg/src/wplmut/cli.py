"""Command-line driver: run verification suites and manage the Hall-number cache."""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import click

from . import hall
from .lattice import LNormalForm, WeightData, parse_weights
from .reports import Report

SUITES = (
    "weyl",
    "mutation",
    "upsilon-braid",
    "exp-ad",
    "tits",
    "hall-appendix",
    "lusztig-appendix",
    "eta",
    "theorem5",
)

DEFAULT_WEIGHTS = {
    "mutation": "2,3;2,2,2;3,3,3;2,3,5;2,3,7",
    "upsilon-braid": "2,3",
    "exp-ad": "2,3",
    "tits": "2,2;2,2,2",
    "eta": "2,3",
    "theorem5": "2,2;2,3",
}
DEFAULT_N = {"weyl": (2, 3, 4, 5, 6), "hall-appendix": (2, 3, 4), "lusztig-appendix": (2, 3, 4)}


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    weights: list[tuple[int, ...]] = field(default_factory=list)
    q_list: tuple[int, ...] = (2, 3, 5)
    mode: str = "probabilistic"
    height_cap: int = 6
    depth: int = 3
    cache_dir: str | None = None
    report_path: str | None = None
    seed: int = 0
    n_values: tuple[int, ...] = ()
    lc_range: tuple[int, ...] = (-2, -1, 0, 1)
    jobs: int = 1
    timings: bool = False

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        if self.mode not in ("probabilistic", "exact"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        for q in self.q_list:
            if hall.prime_power(q) is None:
                raise ConfigError(f"q = {q} is not a prime power")
        for p in self.weights:
            if not p or any(a < 1 for a in p):
                raise ConfigError(f"bad weights {p}")
        if self.height_cap < 1 or self.depth < 0 or self.jobs < 1:
            raise ConfigError("height cap, depth and jobs must be positive")
        if self.cache_dir is not None and not Path(self.cache_dir).is_dir():
            raise ConfigError(f"cache directory {self.cache_dir} does not exist")

    def weight_data(self) -> list[WeightData]:
        src = self.weights or [parse_weights(s).p for s in DEFAULT_WEIGHTS.get(self.suite, "2,3").split(";")]
        return [WeightData(p) for p in src]

    def ns(self) -> tuple[int, ...]:
        return self.n_values or DEFAULT_N.get(self.suite, ())


def parse_weight_list(text: str) -> list[tuple[int, ...]]:
    try:
        return [parse_weights(chunk).p for chunk in text.split(";") if chunk.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --weights value {text!r}") from exc


def parse_int_list(text: str) -> tuple[int, ...]:
    """Accepts `2,3,5` or a range `2..6`."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..")
            return tuple(range(int(a), int(b) + 1))
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


# ---------------------------------------------------------------------------
# units of work; each is a picklable (name, args) pair run by _run_unit


def twists(w: WeightData, lc_range: Sequence[int]) -> list[LNormalForm]:
    """All normal forms 0 <= l_i < p_i with lc in the given range."""
    out = [LNormalForm((), lc) for lc in lc_range]
    for pi in w.p:
        out = [LNormalForm(x.l + (li,), x.lc) for x in out for li in range(pi)]
    return sorted(out)


def exp_ad_points(w: WeightData) -> list[LNormalForm]:
    """0 and every j x_i with 0 < j < p_i."""
    out = [LNormalForm((0,) * w.t, 0)]
    for i, pi in enumerate(w.p):
        for j in range(1, pi):
            l = [0] * w.t
            l[i] = j
            out.append(LNormalForm(tuple(l), 0))
    return out


def _units(cfg: SuiteConfig) -> list[tuple[str, tuple]]:
    s = cfg.suite
    if s in DEFAULT_N:
        return [(s, (n, cfg.q_list, cfg.mode)) for n in cfg.ns()]
    units: list[tuple[str, tuple]] = []
    for w in cfg.weight_data():
        if s == "mutation":
            units.append((s, (w.p,)))
        elif s == "upsilon-braid":
            for x in twists(w, cfg.lc_range):
                units.extend((s, (w.p, x, k)) for k in range(1, w.t + 1) if w.weight(k) >= 2)
        elif s == "exp-ad":
            units.extend((s, (w.p, x)) for x in exp_ad_points(w))
        elif s == "tits":
            units.append((s, (w.p, cfg.height_cap, cfg.depth)))
        elif s == "eta":
            units.append((s, (w.p, cfg.q_list, cfg.mode, cfg.seed)))
        elif s == "theorem5":
            units.append((s, (w.p, cfg.q_list, cfg.mode)))
    return units


def _tits(p: tuple[int, ...], height_cap: int, depth: int) -> Report:
    from . import kacmoody

    w = WeightData(p)
    rep = Report("tits", {"weights": list(p)})
    if not w.is_finite_type():
        a = kacmoody.build_algebra(w, mode="truncated", height_cap=height_cap)
        rep.extend(kacmoody.verify_model_integrity(a))
        rep.skip(f"corollary/{w}", 'Theorem "corollary for Rx"',
                 "Tits and Xi checks need finite type; a truncated algebra only supports bracket, Serre and grading checks")
        return rep
    a = kacmoody.build_algebra(w)
    rep.extend(kacmoody.verify_model_integrity(a))
    rep.extend(kacmoody.verify_omega_tilde(a))
    d = kacmoody.phi_dictionary(a, depth=depth)
    rep.record(f"phi/{w}/depth={depth}", "Phi dictionary path independence", not d.conflicts,
               len(d.conflicts), 0, "; ".join(d.conflicts[:3]))
    rep.extend(kacmoody.verify_corollary_for_Rx(a))
    return rep


def _run_unit(unit: tuple[str, tuple]) -> Report:
    name, args = unit
    if name == "weyl":
        from .weyl import verify_linear_identities

        return verify_linear_identities(args[0])
    if name == "hall-appendix":
        return hall.verify_appendix_hall(args[0], args[1])
    if name == "lusztig-appendix":
        from .quantum import verify_lusztig_appendix

        return verify_lusztig_appendix(*args)
    w = WeightData(args[0])
    if name == "mutation":
        from .mutation import verify_simple_reflection_theorem

        return verify_simple_reflection_theorem(w)
    if name == "upsilon-braid":
        from .rootcat import verify_upsilon_braid

        return verify_upsilon_braid(w, args[1], args[2])
    if name == "exp-ad":
        from .rootcat import verify_exp_ad_theorems

        return verify_exp_ad_theorems(w, args[1])
    if name == "tits":
        return _tits(*args)
    if name == "eta":
        from .theta import declared_symbol_checks

        return declared_symbol_checks(w, args[1], args[2], seed=args[3])
    if name == "theorem5":
        from .theta import theta_and_theorem5

        return theta_and_theorem5(w, args[1], args[2])
    raise ConfigError(f"unknown unit {name}")


def _params(cfg: SuiteConfig) -> dict[str, Any]:
    out: dict[str, Any] = {"seed": cfg.seed}
    if cfg.suite in DEFAULT_N:
        out["n"] = list(cfg.ns())
    else:
        out["weights"] = [list(w.p) for w in cfg.weight_data()]
    if cfg.suite in ("hall-appendix", "lusztig-appendix", "eta", "theorem5"):
        out["q"] = list(cfg.q_list)
    if cfg.suite in ("lusztig-appendix", "eta", "theorem5"):
        out["mode"] = cfg.mode
    if cfg.suite == "tits":
        out["height_cap"] = cfg.height_cap
        out["depth"] = cfg.depth
    if cfg.suite == "upsilon-braid":
        out["lc"] = list(cfg.lc_range)
    return out


def run_suite(cfg: SuiteConfig, progress: Callable[[str], None] | None = None) -> Report:
    cfg.validate()
    previous = hall.default_cache()
    if cfg.cache_dir is not None:
        hall.set_cache(hall.HallCache(cfg.cache_dir))
    units = _units(cfg)
    rep = Report(cfg.suite, _params(cfg))
    try:
        if cfg.jobs > 1 and len(units) > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                parts = list(pool.map(_run_unit, units))
        else:
            parts = []
            for u in units:
                if progress:
                    progress(f"{u[0]} {u[1][0]}")
                parts.append(_run_unit(u))
    finally:
        hall.default_cache().flush()
        if cfg.cache_dir is not None:
            hall.set_cache(previous)
    for part in parts:
        rep.extend(part)
    rep.checks.sort(key=lambda c: c.id)
    if cfg.report_path:
        Path(cfg.report_path).write_text(rep.to_json(cfg.timings), encoding="utf-8")
    return rep


# ---------------------------------------------------------------------------
# click front end


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Verification workbench for weighted projective lines."""


@main.command("run")
@click.argument("suite")
@click.option("--weights", default=None, help="Weight tuples, e.g. '2,3;2,2,2'.")
@click.option("--q", "q_text", default="2,3,5", show_default=True, help="Field sizes for Hall evaluation.")
@click.option("--mode", default="probabilistic", show_default=True, type=click.Choice(["probabilistic", "exact"]))
@click.option("--height-cap", default=6, show_default=True, type=int)
@click.option("--depth", default=3, show_default=True, type=int)
@click.option("--n", "n_text", default=None, help="Rank list or range for weyl/appendix suites, e.g. '2..6'.")
@click.option("--lc", "lc_text", default="-2..1", show_default=True, help="Range of the c-coefficient for upsilon-braid.")
@click.option("--cache", "cache_dir", default=None, envvar=hall.CACHE_ENV, help="Hall-number cache directory.")
@click.option("--report", "report_path", default=None, help="Write the JSON report here.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int, help="Worker processes.")
@click.option("--timings", is_flag=True, help="Record elapsed times (reports stop being byte-identical).")
@click.option("--quiet", is_flag=True, help="Only print the summary line.")
def run_cmd(suite: str, weights: str | None, q_text: str, mode: str, height_cap: int, depth: int,
            n_text: str | None, lc_text: str, cache_dir: str | None, report_path: str | None, seed: int,
            jobs: int, timings: bool, quiet: bool) -> None:
    """Run SUITE and exit 0 iff no check failed."""
    try:
        cfg = SuiteConfig(
            suite=suite,
            weights=parse_weight_list(weights) if weights else [],
            q_list=parse_int_list(q_text),
            mode=mode,
            height_cap=height_cap,
            depth=depth,
            cache_dir=cache_dir,
            report_path=report_path,
            seed=seed,
            n_values=parse_int_list(n_text) if n_text else (),
            lc_range=parse_int_list(lc_text),
            jobs=jobs,
            timings=timings,
        )
        rep = run_suite(cfg)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    if not quiet:
        for c in rep.checks:
            line = f"{c.status:<20} {c.id}"
            if c.status == "FAIL" and c.detail:
                line += f"  [{c.detail}]"
            click.echo(line)
    s = rep.summary()
    click.echo(" ".join(f"{k}={v}" for k, v in s.items()))
    sys.exit(0 if rep.ok else 1)


@main.command("suites")
def suites_cmd() -> None:
    """List suite ids."""
    for s in SUITES:
        click.echo(s)


@main.command("cache")
@click.argument("cmd", type=click.Choice(["stats", "verify", "compact"]))
@click.option("--cache", "cache_dir", default=None, envvar=hall.CACHE_ENV, help="Hall-number cache directory.")
@click.option("--fraction", default=0.01, show_default=True, type=float, help="Sample fraction for verify.")
@click.option("--seed", default=0, show_default=True, type=int)
def cache_cmd(cmd: str, cache_dir: str | None, fraction: float, seed: int) -> None:
    """Inspect, verify or compact the Hall-number cache."""
    if cache_dir is None:
        raise click.UsageError(f"no cache directory (pass --cache or set {hall.CACHE_ENV})")
    if not os.path.isdir(cache_dir):
        raise click.UsageError(f"cache directory {cache_dir} does not exist")
    try:
        if cmd == "stats":
            out = hall.cache_stats(cache_dir)
        elif cmd == "verify":
            out = hall.cache_verify(cache_dir, fraction, seed)
        else:
            out = hall.cache_compact(cache_dir)
    except hall.CorruptRecord as exc:
        click.echo(f"corrupt cache: {exc}", err=True)
        sys.exit(2)
    click.echo(json.dumps(out, sort_keys=True))
    if cmd == "verify" and out.get("mismatches"):
        sys.exit(1)


if __name__ == "__main__":
    main()
