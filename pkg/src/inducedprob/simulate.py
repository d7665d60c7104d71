"""Monte Carlo cross-check of scenario queries.

Each trial draws a point of the model's uniform domain (or samples a chain's
roots and then its child), evaluates every event directly on the drawn
point, and counts.  Conditional queries discard trials where the condition
fails.  Nothing here uses preimage counting or the exact joint tables.
"""

from __future__ import annotations

import itertools
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import rng
from .core import Chain, Distribution, Event, ProbabilityError, RuleMap, SampleSpace
from .scenarios import Scenario, _model_spaces, evaluate, resolve_atom, resolve_model

__all__ = [
    "SimConfig",
    "QueryEstimate",
    "SimReport",
    "simulate_scenario",
    "simulate_groisman",
    "GroismanEstimate",
    "simulate_sb_protocol",
    "ProtocolReport",
    "format_estimate",
]

CHUNK = 1 << 18


def format_estimate(x: float | None) -> str:
    if x is None:
        return "n/a"
    return f"{x:#.6g}"


@dataclass(frozen=True)
class SimConfig:
    scenario: Scenario
    seed: int = 0
    trials: int = 100_000
    partitions: int = 1
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed <= rng.MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.partitions < 1:
            raise ValueError("partitions must be at least 1")


@dataclass(frozen=True)
class QueryEstimate:
    name: str
    hits: int
    accepted: int
    trials: int
    exact: Fraction | None = None

    @property
    def estimate(self) -> float | None:
        return self.hits / self.accepted if self.accepted else None

    @property
    def stderr(self) -> float | None:
        p = self.estimate
        if p is None:
            return None
        return math.sqrt(p * (1 - p) / self.accepted)

    @property
    def sigma_exact(self) -> float | None:
        """Binomial standard error implied by the exact value."""
        if self.exact is None or not self.accepted:
            return None
        p = float(self.exact)
        return math.sqrt(p * (1 - p) / self.accepted)

    @property
    def z(self) -> float | None:
        s, p = self.sigma_exact, self.estimate
        if s is None or p is None:
            return None
        diff = p - float(self.exact)
        if s == 0:
            return 0.0 if self.hits * self.exact.denominator == self.exact.numerator * self.accepted else math.inf
        return diff / s

    def within(self, k: float = 4.0) -> bool:
        z = self.z
        return z is not None and abs(z) <= k


@dataclass
class SimReport:
    scenario: str
    seed: int
    trials: int
    estimates: list[QueryEstimate] = field(default_factory=list)

    def __getitem__(self, name: str) -> QueryEstimate:
        for e in self.estimates:
            if e.name == name:
                return e
        raise KeyError(name)

    def format_text(self, decimal: bool = False) -> str:
        rows = [("query", "estimate", "exact", "stderr", "z", "accepted")]
        for e in self.estimates:
            exact = "-" if e.exact is None else str(e.exact)
            if decimal and e.exact is not None:
                exact += f" ({float(e.exact):.6f})"
            rows.append(
                (
                    e.name,
                    "no acceptances" if e.estimate is None else format_estimate(e.estimate),
                    exact,
                    "-" if e.stderr is None else f"{e.stderr:.3e}",
                    "-" if e.z is None else f"{e.z:+.3f}",
                    str(e.accepted),
                )
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        head = f"# {self.scenario}: seed={self.seed} trials={self.trials}"
        body = [
            "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
            for r in rows
        ]
        return "\n".join([head] + body)

    def format_tsv(self) -> str:
        lines = []
        for e in self.estimates:
            exact = "" if e.exact is None else f"{e.exact.numerator}/{e.exact.denominator}"
            est = "NA" if e.estimate is None else format_estimate(e.estimate)
            se = "NA" if e.stderr is None else f"{e.stderr:.6e}"
            z = "NA" if e.z is None else f"{e.z:.6f}"
            lines.append(f"{e.name}\t{est}\t{exact}\t{se}\t{z}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# samplers: each returns, for a block of trial indices, a function giving
# the index array of any of the model's spaces


def _key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def _uniform_index(seed: int, start: int, count: int, n: int) -> np.ndarray:
    return rng.below(rng.block(seed, start, count), n).astype(np.int64)


def _categorical(seed: int, start: int, count: int, rows: np.ndarray, cum: np.ndarray, denom: int) -> np.ndarray:
    """Sample column index given per-trial row, from integer cumulative weights."""
    u = rng.below(rng.block(seed, start, count), denom).astype(np.uint64)
    return (u[:, None] >= cum[rows]).sum(axis=1).astype(np.int64)


def _cumulative(dists: list[Distribution]) -> tuple[np.ndarray, int]:
    denom = 1
    for d in dists:
        for w in d.weights.values():
            denom = lcm(denom, w.denominator)
    if denom >= 1 << 63:
        raise ProbabilityError("conditional table denominators too large to sample exactly")
    cum = np.array(
        [np.cumsum([int(w * denom) for w in d.weights.values()])[:-1] for d in dists],
        dtype=np.uint64,
    ).reshape(len(dists), -1)
    return cum, denom


class _MapSampler:
    def __init__(self, rule: RuleMap, seed: int):
        self.rule = rule
        self.seed = rng.derive(seed, _key("map:" + rule.name))
        cod = rule.codomain
        self.image = np.array([cod.index(rule(o)) for o in rule.domain.outcomes], dtype=np.int64)

    def draw(self, start: int, count: int) -> dict[SampleSpace, np.ndarray]:
        dom = _uniform_index(self.seed, start, count, len(self.rule.domain))
        return {self.rule.domain: dom, self.rule.codomain: self.image[dom]}


class _SpaceSampler:
    def __init__(self, space: SampleSpace, seed: int):
        self.space = space
        self.seed = rng.derive(seed, _key("space:" + space.name))

    def draw(self, start: int, count: int) -> dict[SampleSpace, np.ndarray]:
        return {self.space: _uniform_index(self.seed, start, count, len(self.space))}


class _ChainSampler:
    """Roots first (uniform draws, or pushed through the map that induces them), then the child."""

    def __init__(self, chain: Chain, scenario: Scenario, seed: int):
        self.chain = chain
        base = rng.derive(seed, _key("chain:" + chain.name))
        self.roots = []
        for i, prior in enumerate(chain.priors):
            s = rng.derive(base, i)
            source = _inducing_map(scenario, prior)
            if source is not None:
                img = np.array([prior.space.index(source(o)) for o in source.domain.outcomes], dtype=np.int64)
                self.roots.append(("map", s, len(source.domain), img))
            elif prior.space.uniform and len(set(prior.weights.values())) == 1:
                self.roots.append(("uniform", s, len(prior.space), None))
            else:
                cum, denom = _cumulative([prior])
                self.roots.append(("weights", s, denom, cum))
        self.child_seed = rng.derive(base, len(chain.priors))
        parents = chain.parents
        self.radix = [len(p) for p in parents]
        keys = list(itertools.product(*(p.outcomes for p in parents)))
        self.cum, self.denom = _cumulative([chain.cpt[k] for k in keys])

    def draw(self, start: int, count: int) -> dict[SampleSpace, np.ndarray]:
        out: dict[SampleSpace, np.ndarray] = {}
        row = np.zeros(count, dtype=np.int64)
        for (kind, s, n, extra), space, r in zip(self.roots, self.chain.parents, self.radix):
            if kind == "map":
                idx = extra[_uniform_index(s, start, count, n)]
            elif kind == "uniform":
                idx = _uniform_index(s, start, count, n)
            else:
                idx = _categorical(s, start, count, np.zeros(count, dtype=np.int64), extra, n)
            out[space] = idx
            row = row * r + idx
        child = _categorical(self.child_seed, start, count, row, self.cum, self.denom)
        out[self.chain.child] = child
        out[self.chain.joint().space] = row * len(self.chain.child) + child
        return out


def _inducing_map(scenario: Scenario, prior: Distribution) -> RuleMap | None:
    from .core import induced_distribution

    for m in scenario.maps.values():
        if m.codomain == prior.space and m.domain.uniform and induced_distribution(m) == prior:
            return m
    return None


def _mask(event: Event) -> np.ndarray:
    return np.array([o in event.members for o in event.space.outcomes], dtype=bool)


def _plan(scenario: Scenario, seed: int):
    """Group queries by model; build one sampler per model."""
    samplers: dict[int, object] = {}
    plan = []
    for q in scenario.queries.values():
        try:
            model = resolve_model(scenario, q)
            spaces = (model,) if isinstance(model, SampleSpace) else _model_spaces(model)
            target = [resolve_atom(scenario, a, spaces) for a in q.target]
            given = [resolve_atom(scenario, a, spaces) for a in q.given]
        except ProbabilityError:
            plan.append((q, None, None, None))
            continue
        if id(model) not in samplers:
            if isinstance(model, RuleMap):
                samplers[id(model)] = _MapSampler(model, seed)
            elif isinstance(model, Chain):
                samplers[id(model)] = _ChainSampler(model, scenario, seed)
            else:
                samplers[id(model)] = _SpaceSampler(model, seed)
        plan.append(
            (q, id(model), [(e.space, _mask(e)) for e in target], [(e.space, _mask(e)) for e in given])
        )
    return samplers, plan


def _count(samplers, plan, start: int, stop: int) -> np.ndarray:
    counts = np.zeros((len(plan), 2), dtype=np.int64)
    pos = start
    while pos < stop:
        n = min(CHUNK, stop - pos)
        draws = {k: s.draw(pos, n) for k, s in samplers.items()}
        for j, (q, key, target, given) in enumerate(plan):
            if key is None:
                continue
            d = draws[key]
            ok = np.ones(n, dtype=bool)
            for space, mask in given:
                ok &= mask[d[space]]
            hit = ok.copy()
            for space, mask in target:
                hit &= mask[d[space]]
            counts[j, 0] += int(hit.sum())
            counts[j, 1] += int(ok.sum())
        pos += n
    return counts


def simulate_scenario(cfg: SimConfig) -> SimReport:
    """Estimate every query of ``cfg.scenario`` by sampling.

    Trials are split into ``cfg.partitions`` contiguous ranges of trial
    indices; since every random number is a function of its trial index,
    the counts do not depend on the partitioning or on ``cfg.workers``.
    """
    sc = cfg.scenario
    samplers, plan = _plan(sc, cfg.seed)
    bounds = np.linspace(0, cfg.trials, cfg.partitions + 1).astype(np.int64)
    ranges = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    if cfg.workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(lambda r: _count(samplers, plan, *r), ranges))
    else:
        parts = [_count(samplers, plan, a, b) for a, b in ranges]
    total = sum(parts)
    report = SimReport(sc.name, cfg.seed, cfg.trials)
    for (q, key, _, _), (hits, acc) in zip(plan, total):
        exact = q.expected
        if exact is None and key is not None:
            try:
                exact = evaluate(sc, q)
            except ProbabilityError:
                exact = None
        report.estimates.append(QueryEstimate(q.name, int(hits), int(acc), cfg.trials, exact))
    return report


# --------------------------------------------------------------------------
# ball-box experiment at any n


@dataclass(frozen=True)
class GroismanEstimate:
    n: int
    trials: int
    seed: int
    green: int

    @property
    def estimate(self) -> float:
        return self.green / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)

    def format_text(self) -> str:
        return (
            f"# groisman n={self.n}: seed={self.seed} trials={self.trials}\n"
            f"P(green)  {format_estimate(self.estimate)}  stderr {self.stderr:.3e}  (limit 1/3)"
        )


def simulate_groisman(n: int, trials: int, seed: int = 0) -> GroismanEstimate:
    """Toss ``n`` coins, fill the box, draw one ball; count green draws."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    words = (n + 63) // 64
    coin_seed = rng.derive(seed, _key("groisman:coins"))
    pick_seed = rng.derive(seed, _key("groisman:pick"))
    last_bits = n - 64 * (words - 1)
    last_mask = np.uint64((1 << last_bits) - 1) if last_bits < 64 else np.uint64(rng.MASK64)
    green = 0
    pos = 0
    while pos < trials:
        m = min(CHUNK, trials - pos)
        bits = rng.block(coin_seed, pos * words, m * words).reshape(m, words)
        bits[:, -1] &= last_mask
        heads = np.bitwise_count(bits).sum(axis=1).astype(np.int64)
        balls = heads + 2 * (n - heads)
        u = rng.below(rng.block(pick_seed, pos, m), balls.astype(np.uint64)).astype(np.int64)
        green += int((u < heads).sum())
        pos += m
    return GroismanEstimate(n, trials, seed, green)


# --------------------------------------------------------------------------
# direct simulation of the awakening protocol


@dataclass(frozen=True)
class ProtocolReport:
    seed: int
    weeks: int
    heads_weeks: int
    awakenings: int
    heads_awakenings: int
    # per-week sums of h*h, h*a and a*a (h = Heads awakenings, a = awakenings)
    moments: tuple[int, int, int] = (0, 0, 0)

    @property
    def heads_week_fraction(self) -> float:
        return self.heads_weeks / self.weeks

    @property
    def heads_awakening_fraction(self) -> float:
        return self.heads_awakenings / self.awakenings

    def stderr(self, which: str) -> float:
        """Standard error of ``"weeks"`` or ``"awakenings"`` fraction.

        Awakenings within one week are not independent, so the per-awakening
        fraction is treated as a ratio of per-week totals.
        """
        if which == "weeks":
            p = self.heads_week_fraction
            return math.sqrt(p * (1 - p) / self.weeks)
        p = self.heads_awakening_fraction
        hh, ha, aa = self.moments
        w = self.weeks
        mean_a = self.awakenings / w
        resid = (hh - 2 * p * ha + p * p * aa) / w
        return math.sqrt(max(resid, 0.0) / w) / mean_a

    def format_text(self) -> str:
        return "\n".join(
            [
                f"# awakening protocol: seed={self.seed} weeks={self.weeks}",
                f"weeks with Heads        {format_estimate(self.heads_week_fraction)}  ({self.heads_weeks}/{self.weeks})",
                f"awakenings in Heads wks {format_estimate(self.heads_awakening_fraction)}  ({self.heads_awakenings}/{self.awakenings})",
            ]
        )


def simulate_sb_protocol(seed: int, weeks: int) -> ProtocolReport:
    """Run the experiment week by week and log every awakening.

    Sunday: toss the coin.  Monday: wake.  Tuesday: wake only after Tails.
    """
    if weeks < 1:
        raise ValueError("weeks must be at least 1")
    coin_seed = rng.derive(seed, _key("protocol:coin"))
    heads_weeks = awakenings = heads_awakenings = 0
    hh = ha = aa = 0
    pos = 0
    while pos < weeks:
        m = min(CHUNK, weeks - pos)
        heads = (rng.block(coin_seed, pos, m) >> np.uint64(63)) == 0
        a = np.zeros(m, dtype=np.int64)
        h = np.zeros(m, dtype=np.int64)
        for day in ("Mo", "Tu"):
            awake = np.ones(m, dtype=bool) if day == "Mo" else ~heads
            a += awake
            h += awake & heads
        awakenings += int(a.sum())
        heads_awakenings += int(h.sum())
        hh += int((h * h).sum())
        ha += int((h * a).sum())
        aa += int((a * a).sum())
        heads_weeks += int(heads.sum())
        pos += m
    return ProtocolReport(seed, weeks, heads_weeks, awakenings, heads_awakenings, (hh, ha, aa))
