"""Command-line experiments: state inspection, stabilizer tests, protocol
campaigns, parameter displays, oracle certification, and the sampling-distance
audit. Reports are JSON or CSV, deterministic byte-for-byte for a fixed seed
and config.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import click
import numpy as np

from . import __version__
from .distributions import (
    exact_distribution,
    l1_distance,
    parse_bases,
    product_of_marginals,
    uniform_distribution,
)
from .hypergraph import Hypergraph, HypergraphError, load_hypergraph, neighborhood
from .oracle import (
    ORACLE_QUBIT_CAP,
    OracleCapError,
    OracleViolation,
    depolarizing_like_channel,
    oracle_checks,
    pure_density,
    rho_fidelity_with,
)
from .protocol import (
    DEFAULT_REGISTER_BUDGET,
    BudgetExceededError,
    FixedState,
    Honest,
    IIDNoisy,
    ProverStrategy,
    acceptance_probability_iid,
    compute_params,
    de_finetti_correction,
    hoeffding_completeness_bound,
    run_protocol,
)
from .rng import derive_seed, fresh_master_seed, stream
from .stabilizer import pass_probability, run_stabilizer_test
from .statevector import DEFAULT_QUBIT_CAP, QubitCapError, basis_state, build_hypergraph_state

FORMAT_VERSION = 1


def _load_graph(path: Path) -> Hypergraph:
    try:
        return load_hypergraph(path)
    except OSError as exc:
        raise click.ClickException(f"cannot read hypergraph file: {exc}") from exc
    except HypergraphError as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _graph_dict(g: Hypergraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def _emit_json(doc: dict, out: Path | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


def _emit_csv(rows: list[dict], fieldnames: list[str], out: Path | None) -> None:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if out is None:
        click.echo(buffer.getvalue(), nl=False)
    else:
        out.write_text(buffer.getvalue(), encoding="utf-8")


def _resolve_seed(seed: int | None) -> int:
    return fresh_master_seed() if seed is None else seed


def _make_strategy(prover: str, noise: float, g: Hypergraph) -> ProverStrategy:
    if prover == "honest":
        return Honest()
    if prover == "zeros":
        return FixedState(basis_state(g.n, 0))
    if prover == "noisy":
        return IIDNoisy(noise)
    raise click.ClickException(f"unknown prover {prover!r}")


graph_option = click.option(
    "--graph",
    "graph_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Hypergraph file (line 1: n; later lines: hyperedges).",
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the report here instead of stdout.",
)
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
    help="Report format.",
)
seed_option = click.option(
    "--seed", type=int, default=None, help="Master seed; drawn from entropy if omitted."
)


@click.group()
@click.version_option(version=__version__)
def main():
    """Verify hypergraph states with sequential single-qubit Pauli measurements."""


@main.command()
@graph_option
@out_option
@click.option(
    "--dump",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also dump amplitudes, one `bitstring real imag` line each.",
)
def state(graph_path: Path, out: Path | None, dump: Path | None):
    """Build the hypergraph state and report basic diagnostics."""
    g = _load_graph(graph_path)
    try:
        sv = build_hypergraph_state(g)
    except QubitCapError as exc:
        raise click.ClickException(str(exc)) from exc
    if dump is not None:
        dump.write_text("\n".join(sv.dump_lines()) + "\n", encoding="utf-8")
    negatives = int(np.sum(sv.amps.real < 0))
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "state",
        "config": {"graph": str(graph_path), "dump": str(dump) if dump else None},
        "graph": _graph_dict(g),
        "dim": 1 << g.n,
        "norm": sv.norm(),
        "amplitude_magnitude": 2.0 ** (-g.n / 2),
        "negative_amplitudes": negatives,
    }
    _emit_json(doc, out)


@main.command()
@graph_option
@click.option("--vertex", type=int, required=True, help="Vertex whose stabilizer test to run.")
@click.option("--trials", type=int, default=1000, show_default=True)
@seed_option
@click.option(
    "--prover",
    type=click.Choice(["honest", "zeros", "noisy"]),
    default="honest",
    show_default=True,
    help="What each fresh register holds.",
)
@click.option("--noise", type=float, default=0.0, show_default=True, help="Per-qubit Pauli noise for --prover noisy.")
@format_option
@out_option
def test(graph_path, vertex, trials, seed, prover, noise, fmt, out):
    """Run repeated stabilizer tests on fresh registers and tally pass rates."""
    g = _load_graph(graph_path)
    if not 1 <= vertex <= g.n:
        raise click.ClickException(f"vertex {vertex} outside [1, {g.n}]")
    if trials < 1:
        raise click.ClickException("--trials must be >= 1")
    master = _resolve_seed(seed)
    strategy = _make_strategy(prover, noise, g)
    outcomes = []
    passes = 0
    for trial in range(trials):
        register = strategy.register_state(g, trial, stream(master, "register", trial))
        outcome = run_stabilizer_test(register, g, vertex, stream(master, "test", trial))
        passes += outcome.passed
        outcomes.append(outcome)

    exact = None
    if prover == "honest":
        exact = pass_probability(build_hypergraph_state(g), g, vertex)
    elif prover == "zeros":
        exact = pass_probability(basis_state(g.n, 0), g, vertex)
    elif prover == "noisy" and g.n <= ORACLE_QUBIT_CAP:
        rho = depolarizing_like_channel(pure_density(build_hypergraph_state(g)), g.n, noise)
        exact = pass_probability(rho, g, vertex)

    config = {
        "graph": str(graph_path),
        "vertex": vertex,
        "trials": trials,
        "prover": prover,
        "noise": noise if prover == "noisy" else None,
    }
    if fmt == "csv":
        rows = [
            {
                "trial": t,
                "alpha": oc.term.alpha,
                "z_support": ";".join(str(v) for v in sorted(oc.term.z_support)),
                "x_result": oc.x_result,
                "z_results": ";".join(str(oc.z_results[v]) for v in sorted(oc.z_results)),
                "passed": int(oc.passed),
            }
            for t, oc in enumerate(outcomes)
        ]
        _emit_csv(rows, ["trial", "alpha", "z_support", "x_result", "z_results", "passed"], out)
        return
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "test",
        "config": config,
        "graph": _graph_dict(g),
        "seed": master,
        "r": neighborhood(g, vertex).r,
        "passes": passes,
        "empirical_pass_rate": passes / trials,
        "exact_pass_probability": exact,
    }
    _emit_json(doc, out)


@main.command()
@graph_option
@click.option("--k", type=int, required=True, help="Registers per test group.")
@click.option("--m", type=int, required=True, help="Discarded registers.")
@click.option("--epsilon", type=float, required=True, help="Threshold slack in (0, 1).")
@click.option("--trials", type=int, default=100, show_default=True, help="Protocol runs in the campaign.")
@seed_option
@click.option(
    "--prover",
    type=click.Choice(["honest", "zeros", "noisy"]),
    default="honest",
    show_default=True,
)
@click.option("--noise", type=float, default=0.0, show_default=True, help="Per-qubit Pauli noise for --prover noisy.")
@click.option(
    "--noise-grid",
    default=None,
    help="Comma-separated noise levels; runs one noisy campaign per level.",
)
@click.option("--budget", type=int, default=DEFAULT_REGISTER_BUDGET, show_default=True, help="Max registers per run.")
@format_option
@out_option
def verify(graph_path, k, m, epsilon, trials, seed, prover, noise, noise_grid, budget, fmt, out):
    """Run a campaign of full protocol executions and report verdicts."""
    g = _load_graph(graph_path)
    if trials < 1:
        raise click.ClickException("--trials must be >= 1")
    try:
        params = compute_params(g, mode="scaled", k=k, m=m, epsilon=epsilon)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    master = _resolve_seed(seed)

    if noise_grid is not None:
        try:
            levels = [float(tok) for tok in noise_grid.split(",") if tok.strip()]
        except ValueError as exc:
            raise click.ClickException(f"bad --noise-grid: {exc}") from exc
        plan = [("noisy", level) for level in levels]
    else:
        plan = [(prover, noise if prover == "noisy" else None)]

    campaigns = []
    for label, (kind, level) in enumerate(plan):
        strategy = _make_strategy(kind, level or 0.0, g)
        runs = []
        for trial in range(trials):
            run_seed = derive_seed(master, "campaign", label, "trial", trial)
            try:
                report = run_protocol(g, strategy, params, run_seed, register_budget=budget)
            except BudgetExceededError as exc:
                raise click.ClickException(str(exc)) from exc
            runs.append(report)
        accepted = sum(r.accepted for r in runs)
        summary = {
            "acceptance_rate": accepted / trials,
            "accepted_runs": accepted,
            "mean_compute_fidelity": sum(r.compute_fidelity for r in runs) / trials,
            "hoeffding_completeness_bound": hoeffding_completeness_bound(params),
        }
        if kind in ("honest", "zeros"):
            register = build_hypergraph_state(g) if kind == "honest" else basis_state(g.n, 0)
            summary["exact_acceptance_probability"] = acceptance_probability_iid(register, g, params)
        elif kind == "noisy" and g.n <= ORACLE_QUBIT_CAP:
            rho = depolarizing_like_channel(pure_density(build_hypergraph_state(g)), g.n, level or 0.0)
            summary["exact_acceptance_probability"] = acceptance_probability_iid(rho, g, params)
        campaigns.append(
            {
                "prover": kind,
                "noise": level,
                "runs": [r.as_dict() for r in runs],
                "summary": summary,
            }
        )

    config = {
        "graph": str(graph_path),
        "k": k,
        "m": m,
        "epsilon": epsilon,
        "trials": trials,
        "prover": prover,
        "noise": noise,
        "noise_grid": noise_grid,
        "budget": budget,
    }
    if fmt == "csv":
        rows = []
        for label, campaign in enumerate(campaigns):
            for trial, run in enumerate(campaign["runs"]):
                row = {
                    "campaign": label,
                    "prover": campaign["prover"],
                    "noise": campaign["noise"] if campaign["noise"] is not None else "",
                    "trial": trial,
                    "seed": run["seed"],
                    "accepted": int(run["accepted"]),
                    "compute_fidelity": run["compute_fidelity"],
                }
                for grp in run["groups"]:
                    row[f"passes_v{grp['vertex']}"] = grp["passes"]
                rows.append(row)
        fieldnames = ["campaign", "prover", "noise", "trial", "seed", "accepted", "compute_fidelity"]
        fieldnames += [f"passes_v{i}" for i in range(1, g.n + 1)]
        _emit_csv(rows, fieldnames, out)
        return
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "verify",
        "config": config,
        "graph": _graph_dict(g),
        "seed": master,
        "params": params.as_dict(),
        "campaigns": campaigns,
    }
    _emit_json(doc, out)


@main.command()
@graph_option
@click.option("--paper-exact", is_flag=True, help="Evaluate the headline parameter formulas.")
@click.option("--k", type=int, default=None, help="Scaled k (with --m and --epsilon).")
@click.option("--m", type=int, default=None, help="Scaled m.")
@click.option("--epsilon", type=float, default=None, help="Scaled epsilon.")
@click.option("--budget", type=int, default=DEFAULT_REGISTER_BUDGET, show_default=True)
@out_option
def params(graph_path, paper_exact, k, m, epsilon, budget, out):
    """Display protocol parameters and whether they are runnable."""
    g = _load_graph(graph_path)
    try:
        if paper_exact:
            p = compute_params(g, mode="paper_exact")
        else:
            p = compute_params(g, mode="scaled", k=k, m=m, epsilon=epsilon)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    total = p.total_registers
    runnable = total <= budget and g.n <= DEFAULT_QUBIT_CAP
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "params",
        "config": {
            "graph": str(graph_path),
            "paper_exact": paper_exact,
            "k": k,
            "m": m,
            "epsilon": epsilon,
            "budget": budget,
        },
        "graph": _graph_dict(g),
        "mode": p.mode,
        "n": p.n,
        "r_values": list(p.r_values),
        "r_max": p.r_max,
        "k": p.k,
        "m": p.m,
        "epsilon": p.epsilon,
        "delta": 1.0 / p.n**3,
        "de_finetti_correction": de_finetti_correction(p),
        "total_registers": total,
        "register_budget": budget,
        "runnable": runnable,
    }
    _emit_json(doc, out)
    if not runnable:
        click.echo(f"# not runnable: {total} registers exceed the budget of {budget}", err=True)


@main.command()
@graph_option
@out_option
def oracle(graph_path, out):
    """Certify the stabilizer identities with the dense-matrix oracle."""
    g = _load_graph(graph_path)
    try:
        report = oracle_checks(g)
    except (OracleCapError, OracleViolation) as exc:
        raise click.ClickException(str(exc)) from exc
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "oracle",
        "config": {"graph": str(graph_path)},
        "graph": _graph_dict(g),
        "report": report.as_dict(),
        "ok": True,
    }
    _emit_json(doc, out)
    for name, dev in report.as_dict()["max_deviation"].items():
        click.echo(f"# {name}: ok (max deviation {dev:.3e})", err=True)


@main.command("sample-distance")
@graph_option
@click.option("--bases", default=None, help="Per-qubit measurement bases, e.g. XXZ (default all X).")
@click.option("--noise", type=float, default=0.01, show_default=True, help="Surrogate per-qubit Pauli noise.")
@click.option(
    "--sampler-budget",
    type=float,
    default=1.0 / 192.0,
    show_default=True,
    help="L1 error allowance granted to a hypothetical classical sampler.",
)
@format_option
@out_option
def sample_distance(graph_path, bases, noise, sampler_budget, fmt, out):
    """Audit the L1 gap between ideal and noisy-surrogate outcome distributions.

    Compares the exact distribution on the ideal state against the exact
    distribution on a noisy surrogate, checks it against the trace-distance
    bound 2*sqrt(1-F), and reports trivial classical baselines for scale.
    """
    g = _load_graph(graph_path)
    if g.n > ORACLE_QUBIT_CAP:
        raise click.ClickException(f"sample-distance needs n <= {ORACLE_QUBIT_CAP}, got {g.n}")
    basis_spec = bases if bases is not None else "X" * g.n
    try:
        basis_tuple = parse_bases(basis_spec, g.n)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    ideal_state = build_hypergraph_state(g)
    surrogate = depolarizing_like_channel(pure_density(ideal_state), g.n, noise)
    fidelity = rho_fidelity_with(surrogate, g)
    p_ideal = exact_distribution(ideal_state, basis_tuple)
    p_surrogate = exact_distribution(surrogate, basis_tuple)
    gap = l1_distance(p_ideal, p_surrogate)
    bound = 2.0 * float(np.sqrt(max(0.0, 1.0 - fidelity)))
    baselines = {
        "uniform": l1_distance(p_ideal, uniform_distribution(basis_tuple)),
        "product_of_marginals": l1_distance(p_ideal, product_of_marginals(p_ideal)),
    }
    if fmt == "csv":
        rows = [
            {
                "outcome": f"{z:0{g.n}b}",
                "p_ideal": float(p_ideal.probs[z]),
                "p_surrogate": float(p_surrogate.probs[z]),
                "abs_diff": float(abs(p_ideal.probs[z] - p_surrogate.probs[z])),
            }
            for z in range(1 << g.n)
        ]
        _emit_csv(rows, ["outcome", "p_ideal", "p_surrogate", "abs_diff"], out)
        return
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "sample-distance",
        "config": {
            "graph": str(graph_path),
            "bases": basis_spec,
            "noise": noise,
            "sampler_budget": sampler_budget,
        },
        "graph": _graph_dict(g),
        "bases": "".join(basis_tuple),
        "surrogate_fidelity": fidelity,
        "l1_ideal_vs_surrogate": gap,
        "trace_distance_bound": bound,
        "within_bound": gap <= bound + 1e-12,
        "l1_baselines": baselines,
        "sampler_budget": sampler_budget,
        "total_l1_budget": bound + sampler_budget,
        "ideal_distribution": p_ideal.as_mapping(),
        "surrogate_distribution": p_surrogate.as_mapping(),
    }
    _emit_json(doc, out)


if __name__ == "__main__":
    main()
