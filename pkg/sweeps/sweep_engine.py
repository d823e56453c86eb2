"""
Seeded Sweep Engine.

Runs one check kind over every (p, r) cell of a SweepConfig. Each trial draws
its inputs from its own named random stream, derived from the root seed, the
kind, the cell and the trial number, so adding a kind or a cell never moves
the inputs of another trial. Trials run on a thread pool; records are sorted
by trial index before the report is assembled.
"""

import time
import zlib
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from engine import __version__
from engine.bgg import lambda_quotient, s_support, s_truncated, tensor_S_J
from engine.cohomology import linear_cocycle
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    SubgroupEmbedding,
    random_embedding,
    random_module,
)
from engine.ideals import Ideal
from engine.p_groups import (
    PGroup,
    group_direct_sum,
    group_tensor,
    regular_group_module,
    trivial_group_module,
)
from engine.polynomials import polynomial_ring_S
from engine.supports import Variety
from engine.theorems import (
    CheckReport,
    check_bgg_bridge,
    check_bgg_chain,
    check_chouinard,
    check_induction_support,
    check_koszul_law,
    check_oracle,
    check_projectivity_support,
    check_subgroup_theorem,
    check_tensor_theorem,
)
from settings.loader import SweepConfig
from validators.validator import Report, TrialRecord


KINDS = ("tensor", "subgroup", "induction", "chouinard", "bgg", "oracle", "koszul")

TrialInputs = Dict[str, Any]
TrialFunction = Callable[[np.random.Generator, int, int, SweepConfig, int], Tuple[TrialInputs, List[CheckReport]]]


def named_stream(seed: int, *names: Any) -> np.random.Generator:
    """Generator for the substream `names` of the root seed."""
    words = [seed] + [zlib.crc32(str(name).encode("utf-8")) for name in names]
    return np.random.default_rng(np.random.SeedSequence(words))


def _coranks(r: int) -> List[int]:
    return [c for c in (1, 2) if r - c >= 1] or [0]


def _embedding(rng: np.random.Generator, p: int, r: int) -> SubgroupEmbedding:
    corank = int(rng.choice(_coranks(r)))
    if corank == 0:
        return SubgroupEmbedding.identity(p, r)
    return random_embedding(p, r, r - corank, rng)


def tensor_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    algebra = ElementaryAbelianAlgebra(p, r)
    m = random_module(algebra, rng, config.dim_max)
    n = random_module(algebra, rng, max(1, config.dim_max // m.dim))
    inputs = {"m": m.to_json(), "n": n.to_json()}
    return inputs, [
        check_tensor_theorem(m, n, config.hopf, config.truncation),
        check_projectivity_support(m, config.truncation),
    ]


def subgroup_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    algebra = ElementaryAbelianAlgebra(p, r)
    e = _embedding(rng, p, r)
    m = random_module(algebra, rng, config.dim_max)
    inputs = {"m": m.to_json(), "embedding": e.to_json()}
    return inputs, [check_subgroup_theorem(m, e, config.truncation)]


def induction_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    e = _embedding(rng, p, r)
    index_of_subgroup = p ** (e.target_rank - e.source_rank)
    n = random_module(e.source, rng, max(1, config.dim_max // index_of_subgroup))
    inputs = {"n": n.to_json(), "embedding": e.to_json()}
    return inputs, [check_induction_support(n, e, config.truncation)]


# Each group with a basis of its elementary abelian subgroups of maximal rank.
CHOUINARD_GROUPS = {
    "Z/4": (lambda: PGroup.cyclic(4, 2), [[2]]),
    "Q8": (PGroup.quaternion, [[4]]),
}


def chouinard_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    name = str(rng.choice(sorted(CHOUINARD_GROUPS)))
    build, subgroups = CHOUINARD_GROUPS[name]
    group = build()
    trivial, regular = trivial_group_module(group), regular_group_module(group)
    shape = str(rng.choice(["trivial", "regular", "sum", "tensor"]))
    module = {
        "trivial": lambda: trivial,
        "regular": lambda: regular,
        "sum": lambda: group_direct_sum(trivial, regular),
        "tensor": lambda: group_tensor(regular, group_direct_sum(trivial, trivial)),
    }[shape]()
    inputs = {"group": name, "module": shape, "subgroups": subgroups}
    return inputs, [check_chouinard(module, subgroups)]


def oracle_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    algebra = ElementaryAbelianAlgebra(p, r)
    m = random_module(algebra, rng, config.dim_max)
    inputs = {"m": m.to_json()}
    return inputs, [check_oracle(m, config.truncation), check_projectivity_support(m, config.truncation)]


def koszul_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    """m ⊗ L_ζ grows with L_ζ, so m is kept below dim_max / p."""
    algebra = ElementaryAbelianAlgebra(p, r)
    m = random_module(algebra, rng, max(1, config.dim_max // p))
    coefficients = [0] * r
    while not any(coefficients):
        coefficients = [int(c) for c in rng.integers(0, p, size=r)]
    zeta = linear_cocycle(algebra, coefficients)
    inputs = {"m": m.to_json(), "zeta": coefficients}
    return inputs, [check_koszul_law(m, zeta, config.truncation)]


def bgg_trial(
        rng: np.random.Generator, p: int, r: int, config: SweepConfig, index: int,
) -> Tuple[TrialInputs, List[CheckReport]]:
    """
    Trial 0 of a cell checks the whole dg chain; later trials check that
    Λ-supports are stable under a change of truncation, on N ⊗_S J for a
    random truncated polynomial module N and on quotients Λ / (ξ_i : i in I).
    Inputs free over Λ are also checked through Hom_Λ(J, -).
    """
    if index == 0:
        return {"chain": True, "m": config.m, "window": list(config.window)}, [
            check_bgg_chain(p, r, config.m, config.window),
        ]
    ring = polynomial_ring_S(p, r)
    if rng.random() < 0.5:
        bounds = [int(b) for b in rng.integers(1, 4, size=r)]
        n_mod = s_truncated(p, r, bounds)
        module = tensor_S_J(n_mod)
        expected = s_support(n_mod)
        inputs = {"tensor_S_J": bounds}
    else:
        killed = [i for i in range(r) if rng.random() < 0.5]
        module = lambda_quotient(p, r, killed)
        free = [ring.var(i) for i in range(r) if i not in killed]
        expected = Variety(Ideal(ring, free))
        inputs = {"lambda_quotient": killed}
    low = max(config.window[1], module.hi + 2)
    return inputs, [check_bgg_bridge(module, [low, low + 2], expected)]


TRIALS: Dict[str, TrialFunction] = {
    "tensor": tensor_trial,
    "subgroup": subgroup_trial,
    "induction": induction_trial,
    "chouinard": chouinard_trial,
    "bgg": bgg_trial,
    "oracle": oracle_trial,
    "koszul": koszul_trial,
}


class SweepEngine:
    """Runs the trials of one check kind over a SweepConfig."""

    def __init__(self, kind: str, config: SweepConfig, max_workers: int = 4,
                 progress: Optional[Callable[[TrialRecord], None]] = None):
        """
        Initialize the sweep engine.

        Args:
            kind: One of KINDS
            config: Validated sweep configuration
            max_workers: Thread pool size
            progress: Called with every finished record (from worker threads)

        Raises:
            ValueError: If the kind is unknown or does not fit the config
        """
        if kind not in TRIALS:
            raise ValueError(f"Unknown check kind {kind!r}; expected one of {list(KINDS)}")
        if kind == "chouinard" and set(config.p) != {2}:
            raise ValueError("The chouinard sweep runs at p = 2 only")
        if max_workers < 1:
            raise ValueError(f"max_workers must be >= 1, got {max_workers}")
        self.kind = kind
        self.config = config
        self.max_workers = max_workers
        self.progress = progress

    def plan(self) -> List[Tuple[int, int, int, int]]:
        """(global index, p, r, trial within the cell) for every trial."""
        jobs = []
        for p, r in self.config.cells():
            for t in range(self.config.trials):
                jobs.append((len(jobs), p, r, t))
        return jobs

    def run_trial(self, index: int, p: int, r: int, t: int) -> TrialRecord:
        record = TrialRecord(trial=index, p=p, r=r)
        start = time.perf_counter()
        rng = named_stream(self.config.seed, self.kind, p, r, t)
        try:
            inputs, checks = TRIALS[self.kind](rng, p, r, self.config, t)
            record.inputs = inputs
            record.checks = [c.to_json() for c in checks]
            record.truncations = sorted({d for c in checks for d in c.truncations})
            record.passed = bool(checks) and all(c.passed for c in checks)
        except (ValueError, RuntimeError) as e:
            record.error = f"{type(e).__name__}: {e}"
            record.passed = False
        record.seconds = time.perf_counter() - start
        return record

    def run(self) -> Report:
        records: List[TrialRecord] = []
        jobs = self.plan()
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = [executor.submit(self.run_trial, *job) for job in jobs]
            for future in as_completed(futures):
                record = future.result()
                records.append(record)
                if self.progress is not None:
                    self.progress(record)
        records.sort(key=lambda record: record.trial)
        config = self.config.to_json()
        config.pop("output", None)
        return Report(tool_version=__version__, kind=self.kind, config=config, records=records)
