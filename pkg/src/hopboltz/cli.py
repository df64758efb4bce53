"""Command-line entry point.

Subcommands: ``hopfield run``, ``hopfield hebbian``, ``boltzmann sample``,
``boltzmann exact``, ``spectral stationary``, ``verify``. JSON goes to stdout,
diagnostics to stderr.

Exit codes: 0 ok, 1 I/O or parse error, 2 no convergence, 3 scope rejection,
4 size guard, 5 a verify criterion failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hopboltz.errors import HopboltzError
from hopboltz.hopfield import (
    HopfieldParams,
    hebbian,
    load_patterns,
    require_orthogonal,
    run_to_convergence_cyclic,
    run_to_convergence_fair,
    verify_pattern_stable,
)
from hopboltz.network import Schedule, load_params, load_state, nets, params_to_json, work_phase

log = logging.getLogger("hopboltz")

EXIT_OK, EXIT_IO, EXIT_NO_CONVERGENCE, EXIT_SCOPE, EXIT_SIZE, EXIT_VERIFY = 0, 1, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for non-convergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: Path | None = None
    init: Path | None = None
    patterns: Path | None = None
    matrix: Path | None = None
    schedule: str = "cyclic"
    once: bool = False
    max_steps: int | None = None
    temperature: float = 1.0
    steps: int = 100_000
    burn_in: int | None = None
    thin: int = 1
    seed: int = 0
    trajectory: Path | None = None
    tol: float = 1e-10
    only: tuple = ()
    fixtures: Path | None = None

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("--temperature must be positive")
        if self.steps < 1:
            raise ValueError("--steps must be >= 1")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("--burn-in must be >= 0")
        if self.thin < 1:
            raise ValueError("--thin must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("--seed must be a 64-bit unsigned integer")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("--max-steps must be >= 1")


def parse_schedule(text: str, n: int) -> Schedule:
    kind, _, rest = text.partition(":")
    try:
        if kind == "cyclic":
            return Schedule.cyclic([int(t) for t in rest.split(",")] if rest else range(n))
        if kind == "explicit":
            return Schedule.explicit([int(t) for t in rest.split(",")], n)
        if kind == "random":
            return Schedule.seeded_random(int(rest), n)
    except ValueError as e:
        raise ValueError(f"bad schedule {text!r}: {e}") from None
    raise ValueError(f"bad schedule {text!r}; use cyclic[:order], explicit:list or random:seed")


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _num(x):
    x = float(x)
    return int(x) if x.is_integer() else x


def cmd_hopfield_run(cfg: RunConfig) -> int:
    params = load_params(cfg.params)
    init = load_state(cfg.init, params.spec.domain)
    if init.n != params.n:
        raise ValueError(f"{cfg.init}: state has {init.n} entries, network has {params.n}")
    schedule = parse_schedule(cfg.schedule, params.n)
    if cfg.once:
        s = work_phase(params, init, schedule.order or schedule.take(0, params.n))
        acts = [_num(a) for a in s.act]
        _emit({"acts": acts, "outs": acts, "nets": [_num(x) for x in nets(params, s)]})
        return EXIT_OK
    if schedule.kind == "cyclic" and isinstance(params, HopfieldParams) and cfg.max_steps is None:
        report = run_to_convergence_cyclic(params, init, schedule.order)
    else:
        max_steps = cfg.max_steps or params.n * 2**params.n + params.n
        report = run_to_convergence_fair(params, init, schedule, max_steps)
    _emit(report.to_json())
    return EXIT_OK


def cmd_hebbian(cfg: RunConfig) -> int:
    patterns = load_patterns(cfg.patterns)
    require_orthogonal(patterns)
    params = hebbian(patterns)
    log.info("n=%d m=%d", params.n, len(patterns))
    for i, p in enumerate(patterns):
        log.info("pattern %d stable: %s, complement stable: %s", i,
                 verify_pattern_stable(params, p.act), verify_pattern_stable(params, -p.act))
    _emit(params_to_json(params))
    return EXIT_OK


def cmd_boltzmann_exact(cfg: RunConfig) -> int:
    from hopboltz.oracle import ENCODING, boltzmann

    params = load_params(cfg.params)
    b = boltzmann(params, cfg.temperature)
    _emit({"encoding": ENCODING, "n": params.n, "T": cfg.temperature,
           "c": b.c, "log_c": b.log_c, "pi": b.pi.tolist()})
    return EXIT_OK


def cmd_boltzmann_sample(cfg: RunConfig) -> int:
    from hopboltz.gibbs import sample_chain
    from hopboltz.oracle import ENCODING, MAX_MATRIX_N, boltzmann_distribution, decode, total_variation
    from hopboltz.rng import RngStream

    params = load_params(cfg.params)
    init = decode(0, params.n) if cfg.init is None else load_state(cfg.init)
    res = sample_chain(params, init, cfg.temperature, cfg.steps, cfg.burn_in, cfg.thin,
                       RngStream(cfg.seed), record=cfg.trajectory is not None)
    out = {"encoding": ENCODING, "n": params.n, "T": cfg.temperature, "steps": cfg.steps,
           "seed": cfg.seed, "tallied": res.tallied, "final": [_num(a) for a in res.final.act],
           "empirical": res.distribution.tolist()}
    if params.n <= MAX_MATRIX_N:
        out["tv_exact"] = total_variation(res.distribution, boltzmann_distribution(params, cfg.temperature))
    if cfg.trajectory is not None:
        Path(cfg.trajectory).write_text("".join(f"{i}\n" for i in res.trajectory.tolist()))
    _emit(out)
    return EXIT_OK


def cmd_spectral_stationary(cfg: RunConfig) -> int:
    from hopboltz.spectral import load_matrix_json, perron_root, stationary_distribution

    with open(cfg.matrix, encoding="utf-8") as fh:
        A = load_matrix_json(json.load(fh))
    cert = perron_root(A, tol=cfg.tol)
    out = cert.to_json()
    if np.max(np.abs(A.sum(axis=0) - 1.0)) <= 1e-9:
        out["stationary"] = stationary_distribution(A, tol=cfg.tol).tolist()
    _emit(out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from hopboltz.acceptance import CRITERIA, GROUPS, run_all

    known = set(GROUPS) | {str(c.number) for c in CRITERIA}
    unknown = sorted(set(cfg.only) - known)
    if unknown:
        raise ValueError(f"unknown criterion selector(s) {unknown}; use one of {GROUPS} or 1-{len(CRITERIA)}")
    results = run_all(only=set(cfg.only) or None, fixtures=cfg.fixtures)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results) and bool(results)
    _emit({"passed": ok, "criteria": [
        {"number": r.number, "group": r.group, "title": r.title, "passed": r.passed,
         "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results]})
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hopboltz", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    hop = sub.add_parser("hopfield").add_subparsers(dest="action", required=True, parser_class=_Parser)
    run = hop.add_parser("run", help="run asynchronous updates to a stable state")
    run.add_argument("--params", type=Path, required=True)
    run.add_argument("--init", type=Path, required=True)
    run.add_argument("--schedule", default="cyclic",
                     help="cyclic[:order] | explicit:i,j,... | random:SEED (default: cyclic)")
    run.add_argument("--max-steps", type=int)
    run.add_argument("--once", action="store_true",
                     help="single work phase over the schedule's list, print acts/outs/nets")
    heb = hop.add_parser("hebbian", help="Hebbian weights for orthogonal patterns")
    heb.add_argument("--patterns", type=Path, required=True)

    bm = sub.add_parser("boltzmann").add_subparsers(dest="action", required=True, parser_class=_Parser)
    smp = bm.add_parser("sample", help="random-scan Gibbs sampling")
    smp.add_argument("--params", type=Path, required=True)
    smp.add_argument("--init", type=Path)
    smp.add_argument("--temperature", type=float, default=1.0)
    smp.add_argument("--steps", type=int, default=100_000)
    smp.add_argument("--burn-in", type=int)
    smp.add_argument("--thin", type=int, default=1)
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--trajectory", type=Path, help="write the state index after every step")
    ex = bm.add_parser("exact", help="exact Boltzmann distribution by enumeration")
    ex.add_argument("--params", type=Path, required=True)
    ex.add_argument("--temperature", type=float, default=1.0)

    sp = sub.add_parser("spectral").add_subparsers(dest="action", required=True, parser_class=_Parser)
    st = sp.add_parser("stationary", help="Perron certificate of a non-negative matrix")
    st.add_argument("--input", dest="matrix", type=Path, required=True)
    st.add_argument("--tol", type=float, default=1e-10)

    ver = sub.add_parser("verify", help="run the acceptance criteria")
    ver.add_argument("--only", action="append", default=[],
                     help="criterion group (network, hopfield, exact, spectral, gibbs) or number")
    ver.add_argument("--fixtures", type=Path)
    return p


COMMANDS = {
    ("hopfield", "run"): cmd_hopfield_run,
    ("hopfield", "hebbian"): cmd_hebbian,
    ("boltzmann", "sample"): cmd_boltzmann_sample,
    ("boltzmann", "exact"): cmd_boltzmann_exact,
    ("spectral", "stationary"): cmd_spectral_stationary,
    ("verify", None): cmd_verify,
}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    if "only" in kw:
        kw["only"] = tuple(kw["only"])
    return RunConfig(command=f"{ns.group} {getattr(ns, 'action', '')}".strip(), **kw)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.INFO, stream=sys.stderr,
                        format="%(levelname)s: %(message)s", force=True)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[(ns.group, getattr(ns, "action", None))](cfg)
    except HopboltzError as e:
        log.error("%s", e)
        return e.exit_code
    except (OSError, ValueError) as e:
        log.error("%s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
