"""
Command-line front end: enumerate, act, verify, canonical, ffcheck

Exit codes: 0 success, 1 invariant or suite failure, 2 usage or configuration
error, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from config.config import FORMATS, SUITES, JobConfig, load_job_config
from hecke.barcanon import canonical_basis
from hecke.exceptions import ConfigError, HeckeError, InvariantViolation, PreconditionError
from hecke.fforacle import run_ffcheck
from hecke.serialize import (
    Artifact,
    action_artifact,
    canonical_artifact,
    enumerate_artifact,
    ffcheck_artifact,
    verify_artifact,
    write_atomic,
)
from hecke.suites import run_suites
from hecke.torusquot import TorusPoint, orbit_of, orbits
from utils.logger import log
from utils.module_factory import ModuleFactory

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="flat key/value file (.env or .yaml)")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
    common.add_argument("--out", default=None, help="write the artifact here instead of stdout")
    return common


def _module_options() -> argparse.ArgumentParser:
    module = argparse.ArgumentParser(add_help=False)
    module.add_argument("--type", dest="cartan_type", default=None, help='Cartan type, e.g. "A2" or "A1xA1"')
    module.add_argument("--m", type=int, default=None)
    module.add_argument("--denominator", "--N", type=int, default=None)
    return module


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hecke", description="Twisted-involution Hecke modules")
    sub = parser.add_subparsers(dest="command", required=True)
    parents = [_common_options(), _module_options()]

    sub.add_parser("enumerate", parents=parents, help="list the twisted involutions and blocks")

    act = sub.add_parser("act", parents=parents, help="action tables of the generators T_s")
    act.add_argument("--gen", default=None, help="generators such as s1 or s1,s2 (default: all)")

    verify = sub.add_parser("verify", parents=parents, help="run verification suites")
    verify.add_argument("--suites", default=None, help=f"comma list from {','.join(SUITES)}")
    verify.add_argument("--threads", type=int, default=None)

    canonical = sub.add_parser("canonical", parents=parents, help="canonical basis")
    canonical.add_argument("--orbit", default=None, help="base point such as 0,1/2 (default: every orbit)")

    ffcheck = sub.add_parser("ffcheck", parents=[_common_options()], help="finite-field identity checks")
    ffcheck.add_argument("--q", type=int, action="append", default=None, help="odd prime; repeatable")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, object]:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if isinstance(flags.get("suites"), str):
        flags["suites"] = tuple(s.strip() for s in flags["suites"].split(",") if s.strip())
    if isinstance(flags.get("q"), list):
        flags["q"] = flags["q"][0]
    return flags


def parse_generators(text: Optional[str], rank: int) -> List[int]:
    """
    Parse "s1,s2" (or "1,2") into 1-based generator labels

    Raises:
        ConfigError: on labels that are not generators of the given rank
    """
    if not text:
        return list(range(1, rank + 1))
    labels = []
    for part in text.split(","):
        token = part.strip().lower().lstrip("s")
        if not token.isdigit() or not 1 <= int(token) <= rank:
            raise ConfigError(f"generator {part.strip()!r} is not one of s1..s{rank}")
        labels.append(int(token))
    return labels


def cmd_enumerate(job: JobConfig) -> tuple:
    module = ModuleFactory.from_job(job)
    artifact = enumerate_artifact(module)
    return artifact, artifact.document["reconciliation"]["match"]


def cmd_act(job: JobConfig) -> tuple:
    module = ModuleFactory.from_job(job)
    return action_artifact(module, parse_generators(job.gen, module.rank)), True


def cmd_verify(job: JobConfig) -> tuple:
    module = ModuleFactory.from_job(job)
    reports = run_suites(module, job.suites, job.threads)
    artifact = verify_artifact(module, reports)
    return artifact, artifact.document["passed"]


def cmd_canonical(job: JobConfig) -> tuple:
    module = ModuleFactory.from_job(job)
    d = module.datum
    if job.orbit is not None:
        base = TorusPoint.parse(job.orbit)
        if len(base.coords) != module.rank:
            raise ConfigError(f"orbit base point {job.orbit!r} needs {module.rank} coordinates")
        if base not in module.lambdas:
            raise PreconditionError(f"orbit base point {job.orbit!r} carries no twisted involution for m={module.m}")
        selected = [orbit_of(d, base)]
    else:
        selected = orbits(d, module.lambdas)
    tables = [canonical_basis(module, orbit) for orbit in selected]
    return canonical_artifact(module, tables), True


def cmd_ffcheck(job: JobConfig, q_values: Sequence[int]) -> tuple:
    reports = [run_ffcheck(q) for q in q_values]
    artifact = ffcheck_artifact(reports)
    return artifact, artifact.document["passed"]


def _emit(artifact: Artifact, job: JobConfig) -> None:
    text = artifact.render(job.output_format)
    if job.out:
        write_atomic(Path(job.out), text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        job = load_job_config(_flags(args), args.config)
        log.info(f"hecke {args.command}: {job}")
        if args.command == "enumerate":
            artifact, passed = cmd_enumerate(job)
        elif args.command == "act":
            artifact, passed = cmd_act(job)
        elif args.command == "verify":
            artifact, passed = cmd_verify(job)
        elif args.command == "canonical":
            artifact, passed = cmd_canonical(job)
        else:
            artifact, passed = cmd_ffcheck(job, args.q or [job.q])
        _emit(artifact, job)
    except InvariantViolation as e:
        log.error(f"Invariant failure: {e} (witness: {e.witness})")
        return EXIT_FAILURE
    except HeckeError as e:
        log.error(f"{type(e).__name__}: {e}")
        print(f"hecke: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        log.error(f"I/O failure: {e}")
        print(f"hecke: I/O error: {e}", file=sys.stderr)
        return EXIT_IO

    return EXIT_OK if passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
