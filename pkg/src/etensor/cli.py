"""Command-line front end.

Subcommands: compute, optimize, measure, apply, regroup, oracle,
paper-suite.  Party labels and subsets are 1-based on this surface and
converted once at the boundary; everything below is 0-based.  Output is
JSON on stdout (or an aligned table for ``compute --table``); diagnostics
go to stderr.  Exit codes: 0 success, 2 usage/parse/file problems,
1 computation errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from typing import Any, Sequence, TextIO

import numpy as np

from .ketparse import (
    KetFormatError,
    KetSyntaxError,
    load_ket_json,
    parse_ket,
    state_to_dict,
)
from .localops import (
    LocalUnitary,
    PartyGrouping,
    hadamard,
    apply_local,
    measure_party,
    phase_gate,
    regroup,
    trace_to_pair,
)
from .oracles import (
    concurrence_mixed_2qubit,
    concurrence_pure_2qubit,
    concurrence_purity,
    dur_average,
)
from .states import NormalizationError, StateVector, ghz_state, w_state
from .supremum import OptimizerConfig, maximize_component, maximize_simultaneous
from .tensor import (
    NormalizationScheme,
    SubsetSelector,
    TensorReport,
    component,
    component_evaluator,
    full_tensor,
    report_to_dict,
    separability_scan,
)

SEED_ENV_VAR = "ETENSOR_SEED"


def _round_floats(obj: Any) -> Any:
    """Clamp every float to 15 significant digits for display."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {key: _round_floats(value) for key, value in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(value) for value in obj]
    return obj


def _emit_json(doc: Any, out: TextIO) -> None:
    json.dump(doc, out, indent=1)
    out.write("\n")


def _parse_subset(text: str) -> SubsetSelector:
    try:
        parties = sorted(int(p) for p in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad subset {text!r}: expected comma-separated "
                         "1-based party numbers") from exc
    if any(p < 1 for p in parties):
        raise ValueError(f"bad subset {text!r}: party numbers are 1-based")
    return SubsetSelector(tuple(p - 1 for p in parties))


def _parse_groups(text: str) -> PartyGrouping:
    blocks = []
    for block_text in text.split("|"):
        try:
            blocks.append(tuple(int(p) - 1 for p in block_text.split(",")))
        except ValueError as exc:
            raise ValueError(
                f"bad grouping {text!r}: expected blocks like '1,2|3,4'"
            ) from exc
    return PartyGrouping(tuple(blocks))


def _parse_norm_consts(entries: Sequence[str]) -> NormalizationScheme:
    constants: dict[int, float] = {}
    for entry in entries:
        match = re.fullmatch(r"\s*(\d+)\s*=\s*([0-9.eE+-]+)\s*", entry)
        if not match:
            raise ValueError(
                f"bad normalization constant {entry!r}: expected 'D=VALUE'"
            )
        constants[int(match.group(1))] = float(match.group(2))
    return NormalizationScheme(constants)


def _load_state(args: argparse.Namespace) -> StateVector:
    normalize = bool(getattr(args, "normalize", False))
    if getattr(args, "expr", None):
        return parse_ket(args.expr, normalize=normalize)
    path = args.state
    if path is None:
        raise ValueError("provide --state FILE or --expr TEXT")
    if path.endswith(".ket.json"):
        return load_ket_json(path, normalize=normalize)
    if path.endswith(".ket"):
        with open(path) as fh:
            return parse_ket(fh.read(), normalize=normalize)
    # unknown extension: sniff JSON, otherwise treat as an expression file
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return load_ket_json(path, normalize=normalize)
    return parse_ket(text, normalize=normalize)


def _load_unitary_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise KetFormatError(f"invalid unitary JSON: {exc}") from exc
    try:
        re_part = np.asarray(data["re"], dtype=float)
        im_part = np.asarray(data.get("im", np.zeros_like(re_part)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise KetFormatError(
            "unitary file must hold {'re': [[...]], 'im': [[...]]}"
        ) from exc
    return re_part + 1j * im_part


def _parse_gate(text: str, party: int, dim: int) -> LocalUnitary:
    if text == "H":
        if dim != 2:
            raise ValueError("the H gate acts on qubits only")
        return hadamard(party)
    phase_match = re.fullmatch(r"PHASE\(([^)]*)\)", text)
    if phase_match:
        phases = [float(x) for x in phase_match.group(1).split(",")]
        if len(phases) != dim:
            raise ValueError(
                f"PHASE needs {dim} angles for a party of dimension {dim}, "
                f"got {len(phases)}"
            )
        return phase_gate(party, phases)
    file_match = re.fullmatch(r"U\((.+)\)", text)
    if file_match:
        return LocalUnitary(party, _load_unitary_matrix(file_match.group(1)))
    raise ValueError(
        f"unknown gate {text!r}: expected H, PHASE(p0,...,pN-1), or U(file)"
    )


def _unitary_to_dict(unitary: LocalUnitary) -> dict[str, Any]:
    return {
        "party": unitary.party + 1,
        "re": unitary.matrix.real.tolist(),
        "im": unitary.matrix.imag.tolist(),
    }


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_compute(args: argparse.Namespace, out: TextIO) -> int:
    state = _load_state(args)
    scheme = _parse_norm_consts(args.norm_const or [])
    if args.subset:
        selectors = [_parse_subset(s) for s in args.subset]
        for selector in selectors:
            selector.validate_for(state.structure)
        values = {
            sel: component(state, sel, scheme) for sel in selectors
        }
        report = TensorReport(state.structure, scheme, values)
    elif args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
        report = full_tensor(state, scheme, sizes=sizes)
    else:
        report = full_tensor(state, scheme)
    doc = report_to_dict(report)
    if args.detached:
        verdicts = separability_scan(state, scheme)
        doc["detached_parties"] = [
            i + 1 for i, flag in enumerate(verdicts) if flag
        ]
    doc = _round_floats(doc)
    if args.table:
        width = max(len("subset"), *(len(",".join(map(str, c["subset"])))
                                     for c in doc["components"]))
        print(f"{'subset':<{width}}  value", file=out)
        for entry in doc["components"]:
            label = ",".join(map(str, entry["subset"]))
            print(f"{label:<{width}}  {entry['value']:.15g}", file=out)
        print(f"{'norm':<{width}}  {doc['tensor_norm']:.15g}", file=out)
    else:
        _emit_json(doc, out)
    return 0


def _cmd_optimize(args: argparse.Namespace, out: TextIO) -> int:
    state = _load_state(args)
    scheme = _parse_norm_consts(args.norm_const or [])
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, "0"))
    config = OptimizerConfig(
        restarts=args.restarts,
        max_iters=args.iters,
        step_tol=args.step_tol,
        value_tol=args.value_tol,
        seed=seed,
    )
    if args.subsets:
        selectors = [_parse_subset(s) for s in args.subsets.split(";")]
        for selector in selectors:
            selector.validate_for(state.structure)
        result = maximize_simultaneous(
            state, selectors, scheme, config, objective=args.objective
        )
        subset_doc = [[p + 1 for p in sel.parties] for sel in selectors]
        objective_name = args.objective
    else:
        if not args.subset:
            raise ValueError("provide --subset or --subsets")
        selector = _parse_subset(args.subset)
        selector.validate_for(state.structure)
        result = maximize_component(state, selector, scheme, config)
        subset_doc = [[p + 1 for p in selector.parties]]
        objective_name = "component"
    doc = {
        "subsets": subset_doc,
        "objective": objective_name,
        "seed": seed,
        "restarts": config.restarts,
        "best_value": result.best_value,
        "best_restart": result.best_restart,
        "restart_values": list(result.restart_values),
        "unitaries": [_unitary_to_dict(u) for u in result.best_unitaries],
    }
    _emit_json(_round_floats(doc), out)
    return 0


def _cmd_measure(args: argparse.Namespace, out: TextIO) -> int:
    state = _load_state(args)
    party = int(args.party) - 1
    prob, conditioned = measure_party(state, party, int(args.outcome))
    doc: dict[str, Any] = {
        "party": int(args.party),
        "outcome": int(args.outcome),
        "probability": float(f"{prob:.15g}"),
    }
    if conditioned is None:
        doc["state"] = None
    else:
        doc["state"] = state_to_dict(conditioned)
        doc["labels"] = list(conditioned.structure.labels)
    _emit_json(doc, out)
    return 0


def _cmd_apply(args: argparse.Namespace, out: TextIO) -> int:
    state = _load_state(args)
    party = int(args.party) - 1
    state.structure.check_party(party)
    gate = _parse_gate(args.gate, party, state.structure.dims[party])
    result = apply_local(state, gate)
    _emit_json(state_to_dict(result), out)
    return 0


def _cmd_regroup(args: argparse.Namespace, out: TextIO) -> int:
    state = _load_state(args)
    grouping = _parse_groups(args.groups)
    result = regroup(state, grouping)
    doc = state_to_dict(result)
    doc["labels"] = list(result.structure.labels)
    _emit_json(doc, out)
    return 0


def _cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    kind = args.kind
    if kind == "dur":
        if args.m is None:
            raise ValueError("oracle --kind dur needs --m")
        value = dur_average(args.m)
        doc = {"kind": "dur", "m": args.m, "value": value}
    else:
        state = _load_state(args)
        if kind == "concurrence":
            value = concurrence_pure_2qubit(state)
            doc = {"kind": "concurrence", "value": value}
        elif kind == "purity":
            if not args.split:
                raise ValueError("oracle --kind purity needs --split")
            grouping = _parse_groups(args.split)
            value = concurrence_purity(state, grouping)
            doc = {"kind": "purity", "split": args.split, "value": value}
        elif kind == "wootters":
            if not args.pair:
                raise ValueError("oracle --kind wootters needs --pair")
            pair = _parse_subset(args.pair)
            if pair.size != 2:
                raise ValueError("--pair must name exactly two parties")
            rho = trace_to_pair(state, pair.parties)
            value = concurrence_mixed_2qubit(rho)
            doc = {
                "kind": "wootters",
                "pair": [p + 1 for p in pair.parties],
                "value": value,
            }
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown oracle kind {kind!r}")
    _emit_json(_round_floats(doc), out)
    return 0


# ---------------------------------------------------------------------------
# built-in golden suite


def _suite_checks() -> list[tuple[str, float, float, float]]:
    """(name, got, want, tolerance) for every closed-form fixture."""
    checks: list[tuple[str, float, float, float]] = []
    tol = 1e-12

    def pair(*parties: int) -> SubsetSelector:
        return SubsetSelector(tuple(parties))

    epr = ghz_state(2)
    checks.append(("epr pair component", component(epr, pair(0, 1)), 1.0, tol))
    checks.append(("epr spin-flip concurrence",
                   concurrence_pure_2qubit(epr), 1.0, tol))

    skew = StateVector(
        epr.structure,
        np.array([math.sqrt(0.9), 0.0, 0.0, math.sqrt(0.1)], dtype=complex),
    )
    checks.append(("skewed pair component = 2|a00 a11|",
                   component(skew, pair(0, 1)), 0.6, tol))

    w3 = w_state(3)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        checks.append((f"w3 pair {a + 1}{b + 1}",
                       component(w3, pair(a, b)), math.sqrt(2.0 / 3.0), tol))
    checks.append(("w3 triple", component(w3, pair(0, 1, 2)), 0.0, tol))

    ghz = ghz_state(3)
    checks.append(("ghz triple", component(ghz, pair(0, 1, 2)), 1.0, tol))
    for a, b in ((0, 1), (0, 2), (1, 2)):
        checks.append((f"ghz pair {a + 1}{b + 1}",
                       component(ghz, pair(a, b)), 0.0, tol))

    hghz = apply_local(ghz, hadamard(0))
    checks.append(("hadamard-ghz pair 23", component(hghz, pair(1, 2)), 1.0, tol))
    checks.append(("hadamard-ghz pair 12", component(hghz, pair(0, 1)), 0.0, tol))
    checks.append(("hadamard-ghz pair 13", component(hghz, pair(0, 2)), 0.0, tol))
    checks.append(("hadamard-ghz triple",
                   component(hghz, pair(0, 1, 2)), 0.0, tol))
    for outcome in (0, 1):
        prob, branch = measure_party(hghz, 0, outcome)
        checks.append((f"hadamard-ghz outcome {outcome} probability",
                       prob, 0.5, tol))
        checks.append((f"hadamard-ghz branch {outcome} concurrence",
                       concurrence_pure_2qubit(branch), 1.0, tol))

    wbar = hghz
    for party in (1, 2):
        wbar = apply_local(wbar, hadamard(party))
    for a, b in ((0, 1), (0, 2), (1, 2)):
        checks.append((f"all-hadamard-ghz pair {a + 1}{b + 1}",
                       component(wbar, pair(a, b)), 1.0, tol))
    checks.append(("all-hadamard-ghz triple",
                   component(wbar, pair(0, 1, 2)), 0.0, tol))

    prod_ghz = parse_ket("(|0,1,1,0> + |1,0,0,1> + |0,1,1,1> + |1,0,0,0>)/2")
    checks.append(("ghz-x-plus c123", component(prod_ghz, pair(0, 1, 2)), 1.0, tol))
    for triple in ((0, 1, 3), (0, 2, 3), (1, 2, 3)):
        name = "".join(str(p + 1) for p in triple)
        checks.append((f"ghz-x-plus c{name}",
                       component(prod_ghz, SubsetSelector(triple)), 0.0, tol))
    pair_max = max(
        component(prod_ghz, SubsetSelector(s))
        for s in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    )
    checks.append(("ghz-x-plus max pair", pair_max, 0.0, tol))
    checks.append(("ghz-x-plus quadruple",
                   component(prod_ghz, pair(0, 1, 2, 3)), 0.0, tol))
    detached = separability_scan(prod_ghz)
    checks.append(("ghz-x-plus party 4 detached",
                   1.0 if detached == [False, False, False, True] else 0.0,
                   1.0, 0.5))

    nested = parse_ket(
        "(|0,0,0,1> + |0,0,1,0> + |1,1,0,1> + |1,1,1,0>"
        " + |0,1,0,0> + |0,1,1,1> + |1,0,0,0> + |1,0,1,1>)/sqrt(8)"
    )
    for s in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        name = "".join(str(p + 1) for p in s)
        checks.append((f"nested pair {name}",
                       component(nested, SubsetSelector(s)), 1.0, tol))
    triple_max = max(
        component(nested, SubsetSelector(s))
        for s in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    )
    checks.append(("nested max triple", triple_max, 0.0, tol))
    checks.append(("nested quadruple",
                   component(nested, pair(0, 1, 2, 3)), 0.0, tol))
    merged = regroup(nested, PartyGrouping(((0, 1), (2, 3))))
    checks.append(("nested regrouped 12|34 component",
                   component(merged, pair(0, 1)), 1.0, tol))

    w4 = w_state(4)
    for s in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        name = "".join(str(p + 1) for p in s)
        checks.append((f"w4 pair {name}",
                       component(w4, SubsetSelector(s)), math.sqrt(0.5), tol))
    w4_high = max(
        component(w4, SubsetSelector(s))
        for s in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (0, 1, 2, 3))
    )
    checks.append(("w4 max higher component", w4_high, 0.0, tol))

    for m in range(3, 9):
        wm = w_state(m)
        evaluator = component_evaluator(wm.structure, pair(0, 1))
        checks.append((f"w{m} pair 12", evaluator(wm.tensor),
                       math.sqrt(2.0 / m), tol))
        checks.append((f"w{m} mean traced concurrence^2",
                       dur_average(m), 4.0 / m**2, 1e-9))
        traced = concurrence_mixed_2qubit(trace_to_pair(wm, (0, 1)))
        checks.append((f"w{m} component^2 / traced^2",
                       evaluator(wm.tensor) ** 2 / traced**2, m / 2.0, 1e-9))
    return checks


def _cmd_paper_suite(args: argparse.Namespace, out: TextIO) -> int:
    checks = _suite_checks()
    failures = 0
    for name, got, want, tol in checks:
        ok = abs(got - want) <= tol
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{status}  {name}: got {got:.15g}, want {want:.15g}", file=out)

    # informative only: a state carrying both pair and triple entanglement,
    # for which no closed-form component values exist
    mixed = parse_ket("(|1,1,0> + |1,0,1> + |0,1,1> + |1,0,0>)/2")
    report = full_tensor(mixed)
    values = ", ".join(
        f"c{''.join(str(p + 1) for p in s.parties)}={v:.6f}"
        for s, v in report.components.items()
    )
    print(f"INFO  pair+triple example state: {values}", file=out)
    print(
        "INFO  w-state contrast: pair components square to 2/M when the "
        "other parties measure and communicate; discarded (traced-out) "
        "pairs average 4/M^2",
        file=out,
    )
    total = len(checks)
    print(f"{total - failures}/{total} checks passed", file=out)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_state_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--state", help="path to a .ket or .ket.json file")
    sub.add_argument("--expr", help="inline ket expression")
    sub.add_argument(
        "--normalize", action="store_true",
        help="rescale unnormalized input instead of rejecting it",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etensor",
        description="entanglement tensor components of pure multipartite states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser(
        "compute", help="component values for subsets of parties"
    )
    _add_state_arguments(p_compute)
    p_compute.add_argument("--all", action="store_true",
                           help="all subsets of every size (default)")
    p_compute.add_argument("--sizes", help="comma list of subset sizes")
    p_compute.add_argument("--subset", action="append",
                           help="one 1-based subset like 1,2 (repeatable)")
    p_compute.add_argument("--norm-const", action="append", metavar="D=VALUE",
                           help="override the normalization constant for size D")
    p_compute.add_argument("--table", action="store_true",
                           help="aligned table instead of JSON")
    p_compute.add_argument("--detached", action="store_true",
                           help="include the per-party separability verdict")
    p_compute.set_defaults(func=_cmd_compute)

    p_opt = sub.add_parser(
        "optimize", help="maximize components over local unitaries"
    )
    _add_state_arguments(p_opt)
    p_opt.add_argument("--subset", help="1-based subset like 2,3")
    p_opt.add_argument("--subsets",
                       help="semicolon list of subsets for a joint search")
    p_opt.add_argument("--objective", choices=("min", "mean"), default="min",
                       help="joint objective for --subsets")
    p_opt.add_argument("--restarts", type=int, default=32)
    p_opt.add_argument("--iters", type=int, default=500)
    p_opt.add_argument("--step-tol", type=float, default=1e-8)
    p_opt.add_argument("--value-tol", type=float, default=1e-10)
    p_opt.add_argument("--seed", type=int, default=None,
                       help=f"default: ${SEED_ENV_VAR} or 0")
    p_opt.add_argument("--norm-const", action="append", metavar="D=VALUE")
    p_opt.set_defaults(func=_cmd_optimize)

    p_measure = sub.add_parser(
        "measure", help="computational-basis measurement of one party"
    )
    _add_state_arguments(p_measure)
    p_measure.add_argument("--party", type=int, required=True)
    p_measure.add_argument("--outcome", type=int, required=True)
    p_measure.set_defaults(func=_cmd_measure)

    p_apply = sub.add_parser("apply", help="apply a local gate")
    _add_state_arguments(p_apply)
    p_apply.add_argument("--party", type=int, required=True)
    p_apply.add_argument("--gate", required=True,
                         help="H, PHASE(p0,...,pN-1), or U(file.json)")
    p_apply.set_defaults(func=_cmd_apply)

    p_regroup = sub.add_parser(
        "regroup", help="merge parties into blocks, e.g. --groups 1,2|3,4"
    )
    _add_state_arguments(p_regroup)
    p_regroup.add_argument("--groups", required=True)
    p_regroup.set_defaults(func=_cmd_regroup)

    p_oracle = sub.add_parser(
        "oracle", help="independent concurrence reference values"
    )
    _add_state_arguments(p_oracle)
    p_oracle.add_argument("--kind", required=True,
                          choices=("concurrence", "purity", "wootters", "dur"))
    p_oracle.add_argument("--split", help="bipartition for --kind purity")
    p_oracle.add_argument("--pair", help="kept qubit pair for --kind wootters")
    p_oracle.add_argument("--m", type=int,
                          help="party count for --kind dur")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_suite = sub.add_parser(
        "paper-suite",
        help="run the built-in table of closed-form example states",
    )
    p_suite.set_defaults(func=_cmd_paper_suite)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code
    try:
        return args.func(args, sys.stdout)
    except KetSyntaxError as exc:
        print(f"parse error at {exc.line}:{exc.col}: {exc.reason}",
              file=sys.stderr)
        return 2
    except KetFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except NormalizationError as exc:
        print(f"state error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
