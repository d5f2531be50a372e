"""Command-line entry point.

Exit codes: 0 success, 1 usage or I/O error, 2 a verification found a
violation (incompatible realization, bound violated).
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import schemas
from .inequality import build, classical_bound_bruteforce, classical_bound_fast, hypergraph
from .pauli import CapacityError
from .realization import (Realization, alternative_realization_3, compatibility_report,
                          evaluate, ideal_realization)
from .robustness import (JordanBlockSpec, Statistics, canonical_form_check, certify,
                         validate_robustness)

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2

COMMANDS = ("build", "bounds", "evaluate", "check", "certify", "validate-robustness",
            "export-hypergraph")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    realization: str | None = None
    backend: str = "symbolic"
    stats: str | None = None
    jordan: str | None = None
    output: str | None = None
    format: str = "json"
    brute_force: bool = False
    seed: int = 0
    trials: int = 200
    max_angle: float = 0.3
    max_blocks: int = 8
    jobs: int = 1
    extra: dict = field(default_factory=dict)


def _default(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(obj):
    return json.dumps(obj, indent=2, default=_default) + "\n"


def _load_json(path, schema, what):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None
    schemas.validate(data, schema, f"{what} file {path}")
    return data


def _need_n(cfg):
    if cfg.n is None:
        raise UsageError(f"{cfg.command} requires --n")
    return cfg.n


def _realization(cfg):
    src = cfg.realization
    if src is None:
        raise UsageError(f"{cfg.command} requires --realization FILE|ideal|alt3")
    if src == "ideal":
        return ideal_realization(_need_n(cfg), cfg.backend)
    if src == "alt3":
        if cfg.n not in (None, 3):
            raise UsageError("alt3 realization exists only for n = 3")
        return alternative_realization_3()
    r = Realization.from_json(_load_json(src, schemas.REALIZATION, "realization"))
    if cfg.n is not None and cfg.n != r.n:
        raise UsageError(f"--n {cfg.n} disagrees with realization field n={r.n}")
    return r


def _cmd_build(cfg):
    ineq = build(_need_n(cfg))
    if cfg.format == "dot":
        return hypergraph(ineq).to_dot(), EXIT_OK
    if cfg.format == "text":
        lines = [f"I_{ineq.n}: alpha={ineq.alpha}, {len(ineq)} terms, "
                 f"classical {ineq.classical_bound}, quantum {ineq.quantum_bound}"]
        lines += [str(t) for t in ineq.terms]
        return "\n".join(lines) + "\n", EXIT_OK
    return dumps(ineq.to_json()), EXIT_OK


def _cmd_bounds(cfg):
    n = _need_n(cfg)
    ineq = build(n)
    classical = (classical_bound_bruteforce(ineq, jobs=cfg.jobs) if cfg.brute_force
                 else classical_bound_fast(n))
    out = {"classical": classical, "quantum": ineq.quantum_bound}
    if cfg.format == "text":
        return f"classical {classical}\nquantum {ineq.quantum_bound}\n", EXIT_OK
    return dumps(out), EXIT_OK


def _cmd_evaluate(cfg):
    r = _realization(cfg)
    ineq = build(r.n)
    value = evaluate(ineq, r)
    if cfg.format == "text":
        return f"{value}\n", EXIT_OK
    out = {"n": r.n, "realization": r.name or cfg.realization, "backend": r.backend,
           "value": value, "quantum_bound": ineq.quantum_bound,
           "classical_bound": ineq.classical_bound}
    return dumps(out), EXIT_OK


def _cmd_check(cfg):
    r = _realization(cfg)
    rep = compatibility_report(r)
    out = {"compatibility": rep.to_json()}
    ok = rep.admissible
    if r.backend == "dense" or r.state.n <= 10:
        canon = canonical_form_check(r)
        out["canonical_form"] = canon.to_json()
    if cfg.format == "text":
        lines = [f"admissible: {rep.admissible} (max commutator residual {rep.max_commutator():.3e})"]
        lines += [f"  ||{{{k}}}psi|| = {v:.3e}" for k, v in rep.anticommutators_on_state.items()]
        if "canonical_form" in out:
            for k, v in out["canonical_form"]["predicates"].items():
                lines.append(f"  {k}: {'ok' if v['passed'] else 'FAIL'} ({v['residual']:.3e})")
        return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_VIOLATION
    return dumps(out), EXIT_OK if ok else EXIT_VIOLATION


def _cmd_certify(cfg):
    if (cfg.stats is None) == (cfg.jordan is None):
        raise UsageError("certify needs exactly one of --stats FILE or --jordan FILE")
    if cfg.stats is not None:
        stats = Statistics.from_json(_load_json(cfg.stats, schemas.STATISTICS, "statistics"))
        if cfg.n is not None and cfg.n != stats.n:
            raise UsageError(f"--n {cfg.n} disagrees with statistics field n={stats.n}")
        rep = certify(stats)
    else:
        spec = JordanBlockSpec.from_json(_load_json(cfg.jordan, schemas.JORDAN, "jordan"))
        if cfg.n is not None and cfg.n != spec.n:
            raise UsageError(f"--n {cfg.n} disagrees with jordan spec n={spec.n}")
        rep = certify(spec)
    code = EXIT_VIOLATION if rep.violations else EXIT_OK
    if cfg.format == "text":
        return rep.to_text(), code
    return dumps(rep.to_json()), code


def _cmd_validate(cfg):
    n = _need_n(cfg)
    if cfg.trials < 1:
        raise UsageError("--trials must be positive")
    if not 0 <= cfg.max_angle <= np.pi / 2:
        raise UsageError("--max-angle must lie in [0, pi/2]")
    summary = validate_robustness(n, cfg.trials, cfg.max_angle, cfg.seed, cfg.max_blocks, cfg.jobs)
    code = EXIT_VIOLATION if summary.violating_trials else EXIT_OK
    if cfg.format == "text":
        s = summary
        text = (f"n={s.n} trials={s.trials} seed={s.seed} max_angle={s.max_angle}\n"
                f"violating trials: {s.violating_trials} {s.violation_counts}\n"
                f"non-vacuous trials: {s.non_vacuous_trials}\n"
                f"min margins: state {s.min_margin_state:.6g}, operator "
                f"{s.min_margin_operator:.6g}, lemma {s.min_margin_lemma:.6g}\n")
        return text, code
    return dumps(summary.to_json()), code


def _cmd_hypergraph(cfg):
    hg = hypergraph(build(_need_n(cfg)))
    if cfg.format == "json":
        return dumps(hg.to_json()), EXIT_OK
    return hg.to_dot(), EXIT_OK


_HANDLERS = {
    "build": _cmd_build,
    "bounds": _cmd_bounds,
    "evaluate": _cmd_evaluate,
    "check": _cmd_check,
    "certify": _cmd_certify,
    "validate-robustness": _cmd_validate,
    "export-hypergraph": _cmd_hypergraph,
}


def run(cfg, stdout=None):
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        text, code = _HANDLERS[cfg.command](cfg)
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            stdout.write(text)
        return code
    except (UsageError, schemas.SchemaError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _parser():
    p = argparse.ArgumentParser(prog="ncselftest",
                                description="Scalable noncontextuality inequalities and certification.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--jobs", type=int, default=1, help="worker threads (runtime only)")

    sp = sub.add_parser("build", help="emit I_n")
    sp.add_argument("--n", type=int, required=True)
    common(sp, ("json", "dot", "text"))
    sp.add_argument("--json", dest="format", action="store_const", const="json")
    sp.add_argument("--dot", dest="format", action="store_const", const="dot")

    sp = sub.add_parser("bounds", help="classical and quantum bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--brute-force", action="store_true")
    common(sp)

    for name in ("evaluate", "check"):
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int)
        sp.add_argument("--realization", required=True, help="FILE, 'ideal' or 'alt3'")
        sp.add_argument("--backend", choices=("symbolic", "dense"), default="symbolic",
                        help="backend for the built-in ideal realization")
        common(sp)

    sp = sub.add_parser("certify", help="fidelity bounds from statistics or a Jordan spec")
    sp.add_argument("--n", type=int)
    sp.add_argument("--stats")
    sp.add_argument("--jordan")
    common(sp)

    sp = sub.add_parser("validate-robustness", help="Monte-Carlo check of the fidelity bounds")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--max-angle", type=float, default=0.3)
    sp.add_argument("--max-blocks", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("export-hypergraph", help="compatibility hypergraph")
    sp.add_argument("--n", type=int, required=True)
    common(sp, ("dot", "json"))
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    known = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in known})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
