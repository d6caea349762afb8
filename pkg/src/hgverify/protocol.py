"""The full verifier/prover protocol.

The prover supplies n*k + 1 + m registers of n qubits each. The verifier
permutes them uniformly at random, discards m, keeps one untested computing
register, splits the rest into n groups of k, runs the vertex-i stabilizer
test on every register of group i, and accepts iff every group's pass count
meets its threshold. The simulator additionally peeks at the computing
register's fidelity; that number is auditor-side only and never part of the
verifier's view.

Registers draw their randomness from per-index streams derived from the
master seed, so results are independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

from .hypergraph import Hypergraph, neighborhood
from .rng import stream
from .stabilizer import generator_expectation, pass_probability, run_stabilizer_test
from .statevector import StateVector, apply_pauli_noise, build_hypergraph_state, fidelity_with

DEFAULT_REGISTER_BUDGET = 1_000_000

# 60 digits; enough that ceil(integer * LN2) is unambiguous at any sane scale.
_LN2 = Decimal("0.693147180559945309417232121458176568075500134360255254120680")


class BudgetExceededError(RuntimeError):
    """Protocol run would need more registers than the configured budget."""


class StrategyError(ValueError):
    """A prover strategy produced an unusable register."""


@dataclass(frozen=True)
class ProtocolParams:
    """Protocol sizes: registers per group (k), discards (m), threshold slack.

    ``paper_exact`` mode evaluates k = 2^(2*r_max+3) * n^7,
    m = ceil(2 * n^7 * k^2 * ln 2) and epsilon = 1/(2 n^3); the results are
    exact integers meant for display and are far beyond any runnable budget.
    ``scaled`` mode echoes explicit overrides.
    """

    n: int
    k: int
    m: int
    epsilon: float
    r_values: tuple[int, ...]
    r_max: int
    mode: str

    @property
    def total_registers(self) -> int:
        return self.n * self.k + 1 + self.m

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "m": self.m,
            "epsilon": self.epsilon,
            "r_values": list(self.r_values),
            "r_max": self.r_max,
            "mode": self.mode,
        }


def compute_params(
    g: Hypergraph,
    mode: str = "scaled",
    k: int | None = None,
    m: int | None = None,
    epsilon: float | None = None,
) -> ProtocolParams:
    """Protocol parameters for ``g``, either paper-exact or explicitly scaled."""
    r_values = tuple(neighborhood(g, i).r for i in range(1, g.n + 1))
    r_max = max(r_values)
    if mode == "paper_exact":
        if k is not None or m is not None or epsilon is not None:
            raise ValueError("paper_exact mode computes k, m, epsilon; do not override them")
        n = g.n
        k_exact = 2 ** (2 * r_max + 3) * n**7
        c = 2 * n**7 * k_exact * k_exact
        # Precision tracks the operand size so the ceiling is limited only by
        # the 60-digit ln2 constant, never by intermediate rounding.
        getcontext().prec = len(str(c)) + 20
        m_exact = int((Decimal(c) * _LN2).to_integral_value(rounding="ROUND_CEILING"))
        return ProtocolParams(
            n=n, k=k_exact, m=m_exact, epsilon=1.0 / (2 * n**3),
            r_values=r_values, r_max=r_max, mode="paper_exact",
        )
    if mode == "scaled":
        if k is None or m is None or epsilon is None:
            raise ValueError("scaled mode requires explicit k, m, epsilon")
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if m < 0:
            raise ValueError(f"m must be >= 0, got {m}")
        if not 0.0 < epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
        return ProtocolParams(
            n=g.n, k=k, m=m, epsilon=float(epsilon),
            r_values=r_values, r_max=r_max, mode="scaled",
        )
    raise ValueError(f"unknown mode {mode!r}")


def group_threshold(k: int, epsilon: float, r: int) -> Fraction:
    """Exact pass-count threshold k * (1/2 + (1 - epsilon)/2^(r+1)).

    Kept rational so accept/reject never depends on float rounding dust.
    """
    eps = Fraction(*float(epsilon).as_integer_ratio())
    return k * (Fraction(1, 2) + (1 - eps) / Fraction(2 ** (r + 1)))


def threshold_count(k: int, epsilon: float, r: int) -> int:
    """Smallest integer pass count meeting the threshold (comparison is >=)."""
    return math.ceil(group_threshold(k, epsilon, r))


def de_finetti_correction(params: ProtocolParams) -> float:
    """The reported residual 0.5 * sqrt(2 n^3 k^2 ln2 / m) of the permutation
    reduction; display-only, never certified by the simulator."""
    if params.m == 0:
        return math.inf
    c = 2 * params.n**3 * params.k * params.k
    getcontext().prec = len(str(c)) + 20
    value = (Decimal(c) * _LN2 / Decimal(params.m)).sqrt() / 2
    return float(value)


@dataclass(frozen=True)
class RoleAssignment:
    """Register roles read off a uniformly random permutation.

    ``permutation[p]`` is the (0-based) register index landing in slot p;
    slots [0, m) are discarded, slot m is the computing register, and the n
    consecutive blocks of k slots after it are the test groups for vertices
    1..n.
    """

    permutation: tuple[int, ...]
    discard: tuple[int, ...]
    compute: int
    groups: tuple[tuple[int, ...], ...]


def assign_roles(params: ProtocolParams, rng: np.random.Generator) -> RoleAssignment:
    """Draw the uniform register permutation and read roles off positionally."""
    total = params.total_registers
    if total > 50_000_000:
        raise BudgetExceededError(f"{total} registers is too many to even permute")
    perm = tuple(int(x) for x in rng.permutation(total))
    discard = perm[: params.m]
    compute = perm[params.m]
    groups = tuple(
        perm[params.m + 1 + i * params.k : params.m + 1 + (i + 1) * params.k]
        for i in range(params.n)
    )
    return RoleAssignment(permutation=perm, discard=discard, compute=compute, groups=groups)


class ProverStrategy:
    """What the prover places in each register. Subclasses are deterministic
    functions of (hypergraph, register index, per-register stream)."""

    def register_state(self, g: Hypergraph, index: int, rng: np.random.Generator) -> StateVector:
        raise NotImplementedError


class Honest(ProverStrategy):
    """Every register is the ideal hypergraph state."""

    def __init__(self):
        self._cache: tuple[Hypergraph, StateVector] | None = None

    def register_state(self, g, index, rng):
        if self._cache is None or self._cache[0] != g:
            self._cache = (g, build_hypergraph_state(g))
        return self._cache[1].copy()


class IIDNoisy(ProverStrategy):
    """Ideal state with i.i.d. per-qubit random Pauli noise in each register."""

    def __init__(self, per_qubit_prob: float):
        if not 0.0 <= per_qubit_prob <= 1.0:
            raise ValueError(f"noise probability {per_qubit_prob} outside [0, 1]")
        self.per_qubit_prob = per_qubit_prob
        self._cache: tuple[Hypergraph, StateVector] | None = None

    def register_state(self, g, index, rng):
        if self._cache is None or self._cache[0] != g:
            self._cache = (g, build_hypergraph_state(g))
        return apply_pauli_noise(self._cache[1].copy(), self.per_qubit_prob, rng)


class FixedState(ProverStrategy):
    """The same pure state, i.i.d. in every register."""

    def __init__(self, state: StateVector):
        self.state = state

    def register_state(self, g, index, rng):
        if self.state.n != g.n:
            raise StrategyError(f"fixed state has {self.state.n} qubits, need {g.n}")
        return self.state.copy()


class Scripted(ProverStrategy):
    """An explicit per-register sequence of states, not necessarily i.i.d."""

    def __init__(self, states: Sequence[StateVector]):
        self.states = list(states)

    def register_state(self, g, index, rng):
        if index >= len(self.states):
            raise StrategyError(f"script has {len(self.states)} states, register {index} requested")
        state = self.states[index]
        if state.n != g.n:
            raise StrategyError(f"scripted state {index} has {state.n} qubits, need {g.n}")
        return state.copy()


@dataclass(frozen=True)
class GroupResult:
    """Test tally for one vertex group."""

    vertex: int
    r: int
    passes: int
    threshold: float
    threshold_count: int
    passed: bool

    def as_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "r": self.r,
            "passes": self.passes,
            "threshold": self.threshold,
            "threshold_count": self.threshold_count,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ProtocolReport:
    """One full protocol run: tallies, verdict, and the auditor-side fidelity."""

    params: ProtocolParams
    groups: tuple[GroupResult, ...]
    accepted: bool
    compute_fidelity: float
    seed: int

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "groups": [grp.as_dict() for grp in self.groups],
            "accepted": self.accepted,
            "compute_fidelity": self.compute_fidelity,
            "seed": self.seed,
        }


def run_protocol(
    g: Hypergraph,
    strategy: ProverStrategy,
    params: ProtocolParams,
    seed: int,
    register_budget: int = DEFAULT_REGISTER_BUDGET,
) -> ProtocolReport:
    """Execute one protocol run, deterministically from the master seed."""
    if params.n != g.n:
        raise ValueError(f"params built for n={params.n}, hypergraph has n={g.n}")
    total = params.total_registers
    if total > register_budget:
        raise BudgetExceededError(
            f"run needs {total} registers, budget is {register_budget}; "
            "scale k and m down (paper-exact parameters are display-only)"
        )
    roles = assign_roles(params, stream(seed, "roles"))
    groups: list[GroupResult] = []
    for vertex in range(1, g.n + 1):
        passes = 0
        for index in roles.groups[vertex - 1]:
            register = strategy.register_state(g, index, stream(seed, "register", index))
            if register.n != g.n:
                raise StrategyError(f"register {index} has {register.n} qubits, need {g.n}")
            outcome = run_stabilizer_test(register, g, vertex, stream(seed, "test", index))
            passes += outcome.passed
        r = params.r_values[vertex - 1]
        need = threshold_count(params.k, params.epsilon, r)
        groups.append(
            GroupResult(
                vertex=vertex,
                r=r,
                passes=passes,
                threshold=float(group_threshold(params.k, params.epsilon, r)),
                threshold_count=need,
                passed=passes >= need,
            )
        )
    compute_state = strategy.register_state(g, roles.compute, stream(seed, "register", roles.compute))
    report = ProtocolReport(
        params=params,
        groups=tuple(groups),
        accepted=all(grp.passed for grp in groups),
        compute_fidelity=fidelity_with(compute_state, g),
        seed=seed,
    )
    return report


def acceptance_probability_iid(
    state: StateVector | np.ndarray, g: Hypergraph, params: ProtocolParams
) -> float:
    """Exact acceptance probability when every register holds ``state`` i.i.d.

    Pass counts are independent binomials, so acceptance is the product of
    binomial upper tails at each group's threshold. This is the closed-form
    oracle the Monte Carlo runs are checked against.
    """
    prob = 1.0
    for vertex in range(1, g.n + 1):
        p_test = pass_probability(state, g, vertex)
        need = threshold_count(params.k, params.epsilon, params.r_values[vertex - 1])
        prob *= float(stats.binom.sf(need - 1, params.k, p_test))
    return prob


def hoeffding_completeness_bound(params: ProtocolParams) -> float:
    """Lower bound 1 - sum_i exp(-2 eps^2 k / 2^(2 r_i + 2)) on honest acceptance."""
    total = sum(
        math.exp(-2.0 * params.epsilon**2 * params.k / 2 ** (2 * r + 2)) for r in params.r_values
    )
    return 1.0 - total


def scaled_soundness_bound(
    expectations: Sequence[float], params: ProtocolParams, delta: float
) -> float:
    """Scaled analogue of the accept-and-bad-register bound for an i.i.d. state.

    If every generator expectation is at least 1 - delta the union bound gives
    n*delta/2; otherwise a violating group passes with probability at most
    exp(-2 (delta-eps)^2 k / 2^(2r+2)) (vacuous unless delta > epsilon).
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    violating = [i for i, e in enumerate(expectations) if e < 1.0 - delta]
    if not violating:
        return params.n * delta / 2.0
    if delta <= params.epsilon:
        return 1.0
    return min(
        math.exp(-2.0 * (delta - params.epsilon) ** 2 * params.k / 2 ** (2 * params.r_values[i] + 2))
        for i in violating
    )


@dataclass(frozen=True)
class IIDAudit:
    """Closed-form side of the soundness audit for an i.i.d. strategy."""

    generator_expectations: tuple[float, ...]
    infidelity: float
    p_accept: float
    joint: float
    delta: float
    bound: float
    within_bound: bool


@dataclass(frozen=True)
class SoundnessSummary:
    """Aggregate view over many seeded runs sharing hypergraph and params."""

    runs: int
    accepted_runs: int
    acceptance_rate: float
    accepted_fidelities: tuple[float, ...]
    empirical_joint: float
    iid_audit: IIDAudit | None

    @property
    def accepted_fidelity_min(self) -> float | None:
        return min(self.accepted_fidelities) if self.accepted_fidelities else None

    @property
    def accepted_fidelity_mean(self) -> float | None:
        if not self.accepted_fidelities:
            return None
        return sum(self.accepted_fidelities) / len(self.accepted_fidelities)


def soundness_audit(
    reports: Sequence[ProtocolReport],
    g: Hypergraph | None = None,
    register_state: StateVector | np.ndarray | None = None,
    delta: float | None = None,
) -> SoundnessSummary:
    """Summarize acceptance and computing-register quality over many runs.

    With ``g`` and an i.i.d. ``register_state`` given, also computes the
    closed-form product P[accept] * (1 - F) and checks it against the scaled
    soundness bound at ``delta`` (default 1/n^3). ``empirical_joint`` is the
    Monte Carlo estimate of the same accept-and-infidelity product.
    """
    if not reports:
        raise ValueError("soundness_audit needs at least one run")
    params = reports[0].params
    for rep in reports[1:]:
        if rep.params != params:
            raise ValueError("all runs must share the same params")
    accepted = [rep for rep in reports if rep.accepted]
    empirical_joint = sum(1.0 - rep.compute_fidelity for rep in accepted) / len(reports)
    audit = None
    if register_state is not None:
        if g is None:
            raise ValueError("register_state requires the hypergraph as well")
        expectations = tuple(
            generator_expectation(register_state, g, i) for i in range(1, g.n + 1)
        )
        if isinstance(register_state, StateVector):
            fid = fidelity_with(register_state, g)
        else:
            from .oracle import rho_fidelity_with

            fid = rho_fidelity_with(np.asarray(register_state), g)
        d = delta if delta is not None else 1.0 / g.n**3
        p_accept = acceptance_probability_iid(register_state, g, params)
        joint = p_accept * (1.0 - fid)
        bound = scaled_soundness_bound(expectations, params, d)
        audit = IIDAudit(
            generator_expectations=expectations,
            infidelity=1.0 - fid,
            p_accept=p_accept,
            joint=joint,
            delta=d,
            bound=bound,
            within_bound=joint <= bound + 1e-12,
        )
    return SoundnessSummary(
        runs=len(reports),
        accepted_runs=len(accepted),
        acceptance_rate=len(accepted) / len(reports),
        accepted_fidelities=tuple(rep.compute_fidelity for rep in accepted),
        empirical_joint=empirical_joint,
        iid_audit=audit,
    )
