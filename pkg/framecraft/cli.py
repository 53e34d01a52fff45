"""
Command line front door.

    framecraft <command> [inputs] [--tol T] [--seed S] [--out PATH] [--format json|csv]

Every command writes one report. JSON reports carry an envelope with the
command, its parameters, a sha256 digest of the input files, the results and
the tool version; serialization is byte-stable for fixed inputs and seed. Sweep
commands can emit their table as CSV instead.

Exit codes: 0 success, 2 invalid input or validation failure, 3 numerical
failure.
"""
import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import __version__
from ._almostinv import (
    best_almost_invariant,
    dual_measure_rep,
    atom_laplacian,
    tail_sets,
    thai1_obstruction,
    thai1_witnesses,
)
from ._dyadic import (
    bessel_divergence,
    bs12_relation,
    conjugation_identity,
    haar_gram,
    haar_wavelet,
    is_exact_identity,
)
from ._exceptions import NumericalFailureError, SpecError
from ._frames import DEFAULT_TOL, canonical_parseval, frame_report
from ._groups import (
    DEFAULT_SEED,
    EXHAUSTIVE_ORDER,
    check_cocycle_laws,
    cocycle_table,
    coset_structure,
)
from ._induction import induce, verify_framext
from ._registry import _DictWithGetAttr
from ._representations import (
    fourier_unitary,
    left_regular,
    trivial_representation,
    validate_representation,
)
from ._serialization import (
    decode_document,
    format_float,
    parse_group_spec,
    parse_measure_spec,
    parse_subgroup_spec,
    parse_system_spec,
    render_json,
    system_to_dict,
)
from .families import _resolve_family, profile_frame, truncation_profile

logger = logging.getLogger(__name__)

THREADS_ENV = "FRAMECRAFT_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on.

    `inputs` maps input roles ("system", "group", "subgroup", "measure") to file
    paths; `options` holds command specific parameters.
    """

    command: str
    inputs: Mapping[str, str] = field(default_factory=dict)
    options: Mapping[str, Any] = field(default_factory=dict)
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    out: Optional[str] = None
    format: str = "json"
    timing: bool = False
    regenerate_goldens: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"Tolerance has to be positive, but found {self.tol}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"Seed has to be an unsigned 64-bit integer, but found {self.seed}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"Unknown output format '{self.format}'")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ExperimentConfig":
        if not isinstance(doc, Mapping):
            raise SpecError("Expected a config object", "")
        known = {f.name for f in fields(cls)}
        for key in doc:
            if key not in known:
                raise SpecError(f"Unknown config field '{key}'", f"/{key}")
        if "command" not in doc:
            raise SpecError("Missing field 'command'", "")
        return cls(**doc)

    @property
    def parameters(self) -> dict:
        return {"tol": self.tol, "seed": int(self.seed), **self.options}


@dataclass(frozen=True, eq=False)
class Report:
    command: str
    parameters: Mapping[str, Any]
    inputs_digest: str
    results: Any
    version: str = __version__
    wall_time_ms: Optional[float] = None
    table: Optional[pd.DataFrame] = field(default=None, repr=False)

    def to_dict(self, timing: bool = False) -> dict:
        report = {
            "command": self.command,
            "parameters": dict(self.parameters),
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "version": self.version,
        }
        if timing:
            report["wall_time_ms"] = self.wall_time_ms
        return report

    def render(self, format: str = "json", timing: bool = False) -> str:
        if format == "csv":
            if self.table is None:
                raise ValueError(f"Command '{self.command}' has no tabular output")
            return render_csv(self.table)
        return render_json(self.to_dict(timing))


def render_csv(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, float_format=lambda x: format_float(x))


class Command(NamedTuple):
    name: str
    func: Callable
    inputs: Tuple[str, ...]
    tabular: bool


_commands = _DictWithGetAttr("command")


def command(name: str, inputs: Sequence[str] = (), tabular: bool = False):
    def _decorator(func: Callable):
        _commands[name] = Command(name, func, tuple(inputs), tabular)
        return func

    return _decorator


class Table(NamedTuple):
    frame: pd.DataFrame
    extras: dict


def _threads() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(value)
    except ValueError:
        threads = 0
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} has to be a positive integer, but found '{value}'")
    return threads


@command("frame-report", inputs=["system"])
def _frame_report(config, docs):
    return frame_report(parse_system_spec(docs["system"]), tol=config.tol).to_dict()


@command("canonical", inputs=["system"])
def _canonical(config, docs):
    result = canonical_parseval(parse_system_spec(docs["system"]), tol=config.tol)
    return {
        "system": system_to_dict(result),
        "report": frame_report(result, tol=config.tol).to_dict(),
    }


@command("truncation-profile", tabular=True)
def _truncation_profile(config, docs):
    options = config.options
    family = _resolve_family(options.get("family", "diag"))
    params = {k: options[k] for k in family.params if options.get(k) is not None}
    if params:
        family = family.with_params(**params)
    points = truncation_profile(family, options.get("sizes", [2, 4, 8]), max_workers=_threads())
    return Table(profile_frame(points), {"family": family.name})


def _group_summary(G) -> dict:
    return {
        "name": G.name,
        "order": G.order,
        "identity": G.identity,
        "abelian": G.is_abelian,
        "labels": list(G.labels),
        "inverses": G.inverses,
        "element_orders": G.element_orders(),
        "generators": G.generating_set(),
        "associativity": "exhaustive" if G.order <= EXHAUSTIVE_ORDER else "sampled",
    }


@command("group-validate", inputs=["group"])
def _group_validate(config, docs):
    return _group_summary(parse_group_spec(docs["group"]))


def _cocycle(docs):
    G = parse_group_spec(docs["group"])
    embedding = parse_subgroup_spec(docs["subgroup"], G)
    return cocycle_table(coset_structure(embedding))


@command("cocycle-check", inputs=["group", "subgroup"])
def _cocycle_check(config, docs):
    cocycle = _cocycle(docs)
    structure = cocycle.structure
    laws = check_cocycle_laws(cocycle, seed=config.seed)
    members = np.array(structure.embedding.members)
    return {
        "subgroup": list(structure.embedding.members),
        "index": structure.index,
        "representatives": list(structure.representatives),
        "cosets": [structure.coset(i) for i in range(structure.index)],
        "alpha": members[cocycle.alpha],
        "identity_violations": laws.identity_violations,
        "cocycle_violations": laws.cocycle_violations,
        "equivariance_violations": laws.equivariance_violations,
        "checked": laws.checked,
        "exhaustive": laws.exhaustive,
    }


def _base_rep(cocycle, kind: str):
    N = cocycle.structure.embedding.as_group
    if kind == "regular":
        return left_regular(N)
    if kind == "trivial":
        return trivial_representation(N)
    raise ValueError(f"Unknown base representation '{kind}', use 'regular' or 'trivial'")


@command("induce", inputs=["group", "subgroup"])
def _induce(config, docs):
    cocycle = _cocycle(docs)
    ind = induce(_base_rep(cocycle, config.options.get("base", "regular")), cocycle)
    defects = validate_representation(ind.result, seed=config.seed)
    members = np.array(cocycle.structure.embedding.members)
    return {
        "index": ind.index,
        "base_dim": ind.base_rep.dim,
        "dim": ind.result.dim,
        "block_targets": cocycle.structure.action,
        "block_values": members[cocycle.alpha],
        **defects.to_dict(),
    }


@command("framext", inputs=["group", "subgroup"])
def _framext(config, docs):
    cocycle = _cocycle(docs)
    base = _base_rep(cocycle, config.options.get("base", "regular"))
    w = config.options.get("w")
    if w is None:
        w = np.zeros(base.dim)
        w[0] = 1.0
    report = verify_framext(
        base,
        cocycle,
        np.asarray(w, dtype=float),
        config.options.get("subset"),
        tol=config.tol,
        seed=config.seed,
    )
    return report.to_dict()


@command("gap", inputs=["group"])
def _gap(config, docs):
    G = parse_group_spec(docs["group"])
    kind = config.options.get("rep", "regular")
    if kind == "regular":
        rep = left_regular(G)
    elif kind == "fourier":
        rep = fourier_unitary(G).mult_rep
    else:
        raise ValueError(f"Unknown representation '{kind}', use 'regular' or 'fourier'")
    generators = config.options.get("generators") or G.generating_set()
    report = best_almost_invariant(
        rep, generators, exclude_invariants=bool(config.options.get("exclude_invariants"))
    )
    return report.to_dict()


@command("dual-measure", inputs=["measure"])
def _dual_measure(config, docs):
    measure = parse_measure_spec(docs["measure"])
    values = atom_laplacian(measure)
    gap = best_almost_invariant(dual_measure_rep(measure))
    return {
        "rank": measure.rank,
        "atoms": [
            {"angle": list(angle), "weight": weight, "laplacian": value}
            for (angle, weight), value in zip(measure.atoms, values)
        ],
        "generators": [list(g) for g in measure.generators],
        "identity_atom": measure.identity_atom,
        "obstruction": thai1_obstruction(measure),
        "laplacian_min_eig": gap.laplacian_min_eig,
        "almost_invariant_vectors": measure.identity_atom is not None,
    }


def _index_sets(sets) -> Optional[List[List[int]]]:
    if sets is None:
        return None
    if not isinstance(sets, list) or not all(
        isinstance(s, list) and all(isinstance(j, int) and not isinstance(j, bool) for j in s)
        for s in sets
    ):
        raise SpecError("--sets must be a JSON list of lists of atom indices", "/options/sets")
    return sets


@command("thai1", inputs=["measure"], tabular=True)
def _thai1(config, docs):
    measure = parse_measure_spec(docs["measure"])
    sets = _index_sets(config.options.get("sets")) or tail_sets(measure)
    witnesses = thai1_witnesses(measure, sets)
    frame = pd.DataFrame(
        [(w.n, len(s), w.defect) for w, s in zip(witnesses, sets)],
        columns=["n", "size", "defect"],
    )
    return Table(frame, {"sets": [sorted(s) for s in sets], "obstruction": thai1_obstruction(measure)})


@command("haar-demo")
def _haar_demo(config, docs):
    n_max = int(config.options.get("n_max", 3))
    divergence = bessel_divergence(n_max)
    psi = haar_wavelet()
    return {
        "norm_squared": divergence.norm_squared,
        "rows": divergence.to_frame().to_dict("records"),
        "tail_onset": divergence.tail_onset,
        "gram_identity": is_exact_identity(haar_gram(range(-1, 2), range(-1, 2))),
        "conjugation_identity": all(conjugation_identity(n, psi) for n in range(1, n_max + 1)),
        "bs12_relation": bs12_relation(psi),
    }


@command("bessel-divergence", tabular=True)
def _bessel_divergence(config, docs):
    divergence = bessel_divergence(int(config.options.get("n_max", 20)))
    return Table(
        divergence.to_frame(),
        {"norm_squared": divergence.norm_squared, "tail_onset": divergence.tail_onset},
    )


def run(config: ExperimentConfig) -> Tuple[Optional[Report], int]:
    """Executes one command; returns the report (None on failure) and the exit code."""
    start = time.perf_counter()
    try:
        spec = _commands.resolve(config.command)
        digest = hashlib.sha256()
        docs = {}
        for role in spec.inputs:
            if role not in config.inputs:
                raise ValueError(f"Command '{spec.name}' needs a --{role} input")
            data = Path(config.inputs[role]).read_bytes()
            digest.update(data)
            docs[role] = decode_document(data, config.inputs[role])
        results = spec.func(config, docs)
    except NumericalFailureError as e:
        logger.error(f"Numerical failure after {e.iterations} iterations: {e}")
        return None, 3
    except (ValueError, TypeError, KeyError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return None, 2

    table = None
    if isinstance(results, Table):
        table = results.frame
        results = {**results.extras, "rows": table.to_dict("records")}
    elapsed = (time.perf_counter() - start) * 1000.0
    logger.info(f"{config.command} finished in {elapsed:.1f} ms")
    report = Report(
        command=config.command,
        parameters=config.parameters,
        inputs_digest=digest.hexdigest(),
        results=results,
        wall_time_ms=elapsed,
        table=table,
    )
    return report, 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--tol", type=float, default=None, help=f"Tolerance (default {DEFAULT_TOL})")
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="Seed for randomized checks (default 0x5EED)")
    parser.add_argument("--out", default=None, help="Output path (default stdout)")
    parser.add_argument("--format", choices=["json", "csv"], default=None)
    parser.add_argument("--regenerate-goldens", action="store_true", default=None, help="Allow overwriting an existing --out file")
    parser.add_argument("--timing", action="store_true", default=None, help="Include wall time in the report")
    parser.add_argument("--config", default=None, help="JSON file with an ExperimentConfig")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framecraft",
        description="Frame, group representation and dyadic experiments.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def _subparser(name, help):
        p = sub.add_parser(name, help=help)
        _add_common(p)
        return p

    for name, help in [
        ("frame-report", "Frame bounds and classification of a vector system"),
        ("canonical", "Canonical Parseval frame S^(-1/2) f_k"),
    ]:
        _subparser(name, help).add_argument("--system", help="Vector system JSON")

    p = _subparser("truncation-profile", "Frame bounds of growing truncations")
    p.add_argument("--family", default=None, help="Registered family (diag, overlap)")
    p.add_argument("--sizes", type=int, nargs="+", default=None)
    p.add_argument("--exponent", type=float, default=None, help="Decay exponent of the diag family")

    p = _subparser("group-validate", "Validate a group spec")
    p.add_argument("--group", help="Group spec JSON")

    for name, help in [
        ("cocycle-check", "Cosets, cocycle table and cocycle laws"),
        ("induce", "Induced representation of a subgroup representation"),
        ("framext", "Frame bounds before and after induction"),
    ]:
        p = _subparser(name, help)
        p.add_argument("--group", help="Group spec JSON")
        p.add_argument("--subgroup", help="Subgroup spec JSON")
        if name != "cocycle-check":
            p.add_argument("--base", choices=["regular", "trivial"], default=None)
        if name == "framext":
            p.add_argument("--w", type=float, nargs="+", default=None, help="Base vector (default delta_e)")
            p.add_argument("--subset", type=int, nargs="+", default=None, help="Subset S of N (default N)")

    p = _subparser("gap", "Best almost invariant vector")
    p.add_argument("--group", help="Group spec JSON")
    p.add_argument("--rep", choices=["regular", "fourier"], default=None)
    p.add_argument("--generators", type=int, nargs="+", default=None)
    p.add_argument("--exclude-invariants", action="store_true", default=None)

    p = _subparser("dual-measure", "Diagonal representation of an atomic dual measure")
    p.add_argument("--measure", help="Measure JSON")

    p = _subparser("thai1", "Almost invariant witnesses of an atomic dual measure")
    p.add_argument("--measure", help="Measure JSON")
    p.add_argument("--sets", type=json.loads, default=None, help="JSON list of atom index sets")

    for name, help in [
        ("haar-demo", "Exact Haar orthonormality and BS(1,2) identities"),
        ("bessel-divergence", "Divergence of the Bessel sum along u^-n t u^n"),
    ]:
        _subparser(name, help).add_argument("--n-max", type=int, default=None)
    return parser


_INPUT_ROLES = ("system", "group", "subgroup", "measure")
_GLOBAL_FLAGS = ("tol", "seed", "out", "format", "timing", "regenerate_goldens")


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = vars(args)
    base: Dict[str, Any] = {}
    if values.get("config"):
        base = dict(decode_document(Path(values["config"]).read_bytes(), values["config"]))
        ExperimentConfig.from_dict({"command": args.command, **base})
    inputs = dict(base.get("inputs", {}))
    options = dict(base.get("options", {}))
    skip = set(_INPUT_ROLES) | set(_GLOBAL_FLAGS) | {"command", "config", "verbose"}
    for key, value in values.items():
        if value is None:
            continue
        if key in _INPUT_ROLES:
            inputs[key] = value
        elif key not in skip:
            options[key] = value
    merged = {**base, "command": args.command, "inputs": inputs, "options": options}
    for flag in _GLOBAL_FLAGS:
        if values.get(flag) is not None:
            merged[flag] = values[flag]
    return ExperimentConfig.from_dict(merged)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
    except (ValueError, TypeError, OSError) as e:
        logger.error(f"Invalid configuration: {e}")
        return 2

    report, code = run(config)
    if report is None:
        return code
    try:
        text = report.render(config.format, config.timing)
    except ValueError as e:
        logger.error(str(e))
        return 2
    if config.out is None:
        sys.stdout.write(text)
        return code
    out = Path(config.out)
    if out.exists() and not config.regenerate_goldens:
        logger.error(f"{out} exists; pass --regenerate-goldens to overwrite it")
        return 2
    out.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
