"""
Command Line Interface

``catdual <command> [options]``. Every command resolves a RunConfig (from
``--config`` and the flags given on the command line), runs, prints one
summary line per check and optionally writes a JSON report.

Exit codes: 0 when every check passes, 1 when a verification fails,
2 on invalid input.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..core.bond_algebra import (
    check_associativity,
    compare_algebras,
    generate_algebra,
    structure_constants,
)
from ..core.checks import CheckReport
from ..core.errors import CatDualError, ConfigError, PentagonInconsistencyError
from ..core.fusion_core import (
    _decode,
    category_from_name,
    check_f_blocks,
    check_fusion_ring,
    check_pentagon,
    check_qdims,
)
from ..core.module_data import builtin_module, check_evenness, check_module_pentagon, check_super_blocks
from ..core.mpo_engine import (
    check_commutation,
    check_gauging,
    check_intertwining,
    check_mpo_fusion,
    gauging_map,
    intertwiner_mpo,
    read_state_csv,
    state_fidelity,
    verify_pulling_through,
    write_state_csv,
)
from ..core.operators import conjugate
from ..core.spectra import (
    DENSE_LIMIT,
    diagonalize,
    intertwiner_compatibility,
    multiset_distance,
    sector_decompose,
)
from .config import COMMANDS, RunConfig, get_config_manager, load_config
from .registry import (
    BuiltModel,
    build_inline,
    family_bonds,
    family_spectrum,
    get_preset,
    oracle_spectrum,
    qubit_permutation,
    registry,
    sector_family,
    verify_pair,
)
from .reports import build_report, write_json, write_matrix, write_spectrum_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _parse_twist(text: Optional[str]) -> Any:
    if text is None:
        return None
    if text.startswith("["):
        return _decode(json.loads(text))
    return text


def _emit(report: CheckReport) -> bool:
    print(report.summary_line())
    return report.passed


def _finish(config: RunConfig, passed: bool, checks: List[CheckReport], **payload: Any) -> int:
    if config.report:
        write_json(build_report(config.command, passed, checks, **payload), config.report)
    return EXIT_OK if passed else EXIT_FAILED


def _params(config: RunConfig) -> Dict[str, float]:
    return config.couplings.as_params()


def _build(config: RunConfig, name: Optional[str] = None, twist: Any = None) -> BuiltModel:
    if name is None and config.hamiltonian is not None:
        return build_inline(config.category, config.module or "regular", config.hamiltonian)
    name = name or config.model
    if not name:
        raise ConfigError("no model given (use --model or an inline hamiltonian block)", field_path="model")
    return get_preset(name).build(config.N, _params(config), twist if twist is not None else config.twist)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check_pentagon(config: RunConfig) -> int:
    if not config.category:
        raise ConfigError("check-pentagon needs --category", field_path="category")
    tol = config.tolerances.consistency
    cat = category_from_name(config.category)
    checks = [check_fusion_ring(cat), check_qdims(cat), check_f_blocks(cat, tol), check_pentagon(cat, tol)]
    if "jmax" in cat.params:
        print(f"🔧 {cat.name}: truncated at jmax={cat.params['jmax']}")
    if config.module:
        try:
            mod = builtin_module(config.module, cat)
        except PentagonInconsistencyError as e:
            checks.append(CheckReport.from_residual(f"module[{config.module}]", e.residual, tol, errors=[str(e)]))
        else:
            checks.append(check_module_pentagon(mod, tol))
            if mod.graded:
                checks.append(check_evenness(mod, tol))
            if mod.condensed is not None and mod.condensed.blocks:
                checks.append(check_super_blocks(mod, tol))
    passed = all([_emit(c) for c in checks])
    return _finish(config, passed, checks, category=cat.name, module=config.module)


def cmd_build_hamiltonian(config: RunConfig) -> int:
    tol = config.tolerances.consistency
    model = _build(config)
    H = model.hamiltonian
    checks = [CheckReport.from_residual("hermiticity", H.max_asymmetry(), tol)]
    if config.hamiltonian is None:
        preset, params = get_preset(model.preset), _params(config)
        reference = oracle_spectrum(model.preset, config.N, params)
        if reference is not None:
            distance = multiset_distance(family_spectrum(model.preset, config.N, params), reference)
            checks.append(CheckReport.from_residual("local_form_spectrum", distance, config.tolerances.spectral,
                                                    details={"form": preset.local_form,
                                                             "twists": len(preset.twist_labels(params))}))
        oracle = None if reference is not None else preset.oracle(config.N, params)
        P = qubit_permutation(model, preset)
        if oracle is not None and (P is not None or oracle.dim == H.dim):
            mapped = conjugate(H, P) if P is not None else H
            checks.append(CheckReport.from_residual("local_form", (mapped - oracle).max_abs(), tol,
                                                    details={"form": preset.local_form}))
    print(f"🔧 {model.preset}: N={model.N}, D={H.dim}, nnz={H.nnz}")
    passed = all([_emit(c) for c in checks])
    if config.out:
        write_matrix(H, config.out)
    return _finish(config, passed, checks, **model.metadata(), nnz=H.nnz)


def cmd_spectrum(config: RunConfig) -> int:
    tol = config.tolerances.consistency
    if config.hamiltonian is not None or config.twist is not None:
        model = _build(config)
        if model.dim > DENSE_LIMIT:
            result = diagonalize(model.hamiltonian, tol)
        else:
            result = sector_decompose(model.hamiltonian, model.symmetries, tol, model.twist).to_spectrum_result()
        meta = model.metadata()
    else:
        family = sector_family(config.model, config.N, _params(config), tol)
        result = family.to_spectrum_result()
        meta = {"model": config.model, "N": config.N, "params": _params(config), "dim": family.dim,
                "sectors": len(family.blocks)}
    result.metadata.update(meta)
    print(f"✅ {meta.get('model')}: {len(result)} eigenvalues, ground energy {result.ground_energy:.12f}")
    if config.out:
        write_spectrum_csv(result, config.out)
    return _finish(config, True, [], **meta, ground_energy=result.ground_energy)


def cmd_verify_mpo(config: RunConfig) -> int:
    tol = config.tolerances.consistency
    model = _build(config)
    checks = [check_commutation(model.hamiltonian, model.symmetries, tol)]
    if model.module is not None and model.basis is not None:
        checks.append(verify_pulling_through(model.module, model.basis, model.spec, tol))
        checks.append(check_mpo_fusion(model.module, model.basis, tol))
    if config.model_b:
        dual = _build(config, config.model_b)
        W = intertwiner_mpo(dual.module, model.basis, dual.basis)
        checks.append(check_intertwining(W, model.bonds, dual.bonds, tol))
        if model.dim <= DENSE_LIMIT:
            drift = intertwiner_compatibility(W, model.hamiltonian, dual.hamiltonian, tol)
            checks.append(CheckReport.from_residual("intertwiner_eigenvectors", drift, tol))
    passed = all([_emit(c) for c in checks])
    return _finish(config, passed, checks, **model.metadata())


def cmd_verify_duality(config: RunConfig) -> int:
    a, b = config.model, config.model_b
    if not a or not b:
        raise ConfigError("verify-duality needs --a and --b", field_path="model_b" if a else "model")
    tol = config.tolerances
    params = _params(config)
    report = verify_pair(a, b, config.N, params, tol.consistency, tol.spectral)
    print(report.summary_line())
    for line in report.unmatched:
        print(f"   ❌ {line}")
    if config.report:
        write_json({**report.to_dict(), "command": config.command, "N": config.N, "params": params},
                   config.report)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_structure_constants(config: RunConfig) -> int:
    tol = config.tolerances.consistency

    def constants(name: Optional[str] = None):
        if config.hamiltonian is not None and name is None:
            model = _build(config)
            bonds, label, dim = model.bonds, model.preset, model.dim
        else:
            name = name or config.model
            bonds, label = family_bonds(name, config.N, _params(config)), name
            dim = bonds[0].dim if bonds else None
        basis = generate_algebra(bonds, config.depth, tol, dim=dim)
        return label, dim, structure_constants(basis, tol)

    label, dim, sc = constants()
    checks = [check_associativity(sc, tol)]
    payload: Dict[str, Any] = {"model": label, "N": config.N, "params": _params(config), "dim": dim,
                               "structure_constants": sc.to_dict()}
    print(f"🔧 {label}: {sc.size} basis words, {int(sc.defined.sum())} closed products")
    if config.model_b:
        _, _, other = constants(config.model_b)
        comparison = compare_algebras(sc, other, tol)
        checks.append(CheckReport(name=f"bond_algebra[{label} vs {config.model_b}]",
                                  passed=comparison.isomorphic_as_presented,
                                  max_residual=comparison.max_deviation, tol=tol,
                                  errors=[comparison.reason] if comparison.reason else []))
        payload["comparison"] = comparison.to_dict()
    passed = all([_emit(c) for c in checks])
    return _finish(config, passed, checks, **payload)


def cmd_gauge_map(config: RunConfig) -> int:
    tol = config.tolerances.consistency
    gm = gauging_map(config.group, config.N)
    checks = [check_gauging(gm, tol)]
    n = len(gm.category.labels)
    image = gm.apply(gm.product_state(np.ones(n) / np.sqrt(n)))
    fidelity = state_fidelity(image, gm.flat_state())
    checks.append(CheckReport.from_residual("flat_state_fidelity", 1.0 - fidelity, tol,
                                            details={"fidelity": fidelity}))
    passed = all([_emit(c) for c in checks])
    if config.out:
        write_state_csv(image / np.linalg.norm(image), config.out)
    return _finish(config, passed, checks, group=config.group, N=config.N, fidelity=fidelity)


def cmd_list_models(config: RunConfig) -> int:
    for preset in registry():
        defaults = ", ".join(f"{k}={v}" for k, v in preset.defaults.items())
        print(f"{preset.name:<18} [{defaults}]  {preset.local_form}")
    return EXIT_OK


def cmd_apply_intertwiner(config: RunConfig) -> int:
    if not (config.model and config.model_b and config.input and config.out):
        raise ConfigError("apply-intertwiner needs --a, --b, --in and --out", field_path="input")
    source = _build(config)
    target = _build(config, config.model_b)
    W = intertwiner_mpo(target.module, source.basis, target.basis)
    vec = read_state_csv(config.input, source.dim)
    out = W.apply(vec)
    write_state_csv(out, config.out)
    print(f"✅ mapped {source.dim}-dim state of {source.preset} to {target.dim}-dim state of {target.preset} "
          f"(norm {np.linalg.norm(out):.12f})")
    return EXIT_OK


def cmd_export_matrix(config: RunConfig) -> int:
    if not config.out:
        raise ConfigError("export-matrix needs --out", field_path="out")
    model = _build(config)
    write_matrix(model.hamiltonian, config.out)
    for name, U in model.symmetries.items():
        write_matrix(U, f"{config.out}.{name}.mtx")
    print(f"✅ exported H and {len(model.symmetries)} symmetry operators")
    return EXIT_OK


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "check-pentagon": cmd_check_pentagon,
    "build-hamiltonian": cmd_build_hamiltonian,
    "spectrum": cmd_spectrum,
    "verify-mpo": cmd_verify_mpo,
    "verify-duality": cmd_verify_duality,
    "structure-constants": cmd_structure_constants,
    "gauge-map": cmd_gauge_map,
    "list-models": cmd_list_models,
    "apply-intertwiner": cmd_apply_intertwiner,
    "export-matrix": cmd_export_matrix,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catdual",
        description="Generalized dualities of 1D lattice models from module categories",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  catdual list-models
  catdual check-pentagon --category ising
  catdual spectrum --model tfim --N 8 --out spectrum.csv
  catdual verify-duality --a tfim --b tfim_kw --N 8 --report report.json
  catdual structure-constants --model tfim --b tfim_kw --N 6 --depth 3
  catdual gauge-map --group Z2 --N 6
        """,
    )
    parser.add_argument("--config", help="JSON run file; flags override its fields")
    level = parser.add_mutually_exclusive_group()
    level.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    level.add_argument("--quiet", "-q", action="store_true", help="Errors only")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", "--a", dest="model", help="Preset name (see list-models)")
    common.add_argument("--b", dest="model_b", help="Second preset for comparisons")
    common.add_argument("--category", help="Category address, e.g. ising or rep_uq_sl2:q=1.3,jmax=3")
    common.add_argument("--module", help="Built-in module name")
    common.add_argument("--N", type=int, help="Number of sites")
    common.add_argument("--J", type=float, help="Coupling J")
    common.add_argument("--g", type=float, help="Coupling g")
    common.add_argument("--q", type=float, help="Deformation parameter q")
    common.add_argument("--n", type=int, help="Order of Z_n for the clock presets")
    common.add_argument("--twist", help="Twist label (JSON list for product labels)")
    common.add_argument("--depth", type=int, help="Word length for bond algebras")
    common.add_argument("--group", help="Group for gauge-map (Z2, Z<n>, S3)")
    common.add_argument("--tol", type=float, help="Consistency tolerance")
    common.add_argument("--spectral-tol", type=float, help="Spectral comparison tolerance")
    common.add_argument("--out", help="Output file")
    common.add_argument("--in", dest="input", help="Input state CSV")
    common.add_argument("--report", help="JSON report path")

    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=(HANDLERS[name].__doc__ or name.replace("-", " ")))
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or project defaults) overridden by explicit flags."""
    base = load_config(args.config) if args.config else get_config_manager().defaults
    data = base.to_dict()
    data["command"] = args.command
    for key in ("model", "model_b", "category", "module", "N", "depth", "group", "out", "report", "input"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    for key in ("J", "g", "q", "n"):
        value = getattr(args, key, None)
        if value is not None:
            data["couplings"][key] = value
    if getattr(args, "tol", None) is not None:
        data["tolerances"]["consistency"] = args.tol
    if getattr(args, "spectral_tol", None) is not None:
        data["tolerances"]["spectral"] = args.spectral_tol
    twist = _parse_twist(getattr(args, "twist", None))
    config = RunConfig.from_dict({k: v for k, v in data.items() if k != "twist"}, base)
    config.twist = twist if twist is not None else _decode(base.twist) if base.twist is not None else None
    return config


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    if not args.command:
        parser.print_help()
        return EXIT_INPUT
    try:
        config = resolve_config(args)
        return HANDLERS[config.command](config)
    except ConfigError as e:
        print(f"❌ configuration error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CatDualError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
