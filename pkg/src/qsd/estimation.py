"""Transaction logs, moment estimates, strategy fitting and Monte-Carlo checks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import DegenerateRisk, EmptyInput, MalformedRow, TooFewRecords, ValidationError
from .fisher import fisher_information_closed, fisher_information_grid
from .grid import GridSpec
from .strategy import Strategy, strategy_pdf

SIDES = ("buy", "sell")
GENERATOR = "numpy.random.PCG64"


@dataclass(frozen=True)
class TransactionSample:
    log_prices: np.ndarray
    sides: tuple[str, ...]
    source: str = ""

    def __post_init__(self):
        lp = np.asarray(self.log_prices, dtype=float)
        if lp.ndim != 1 or lp.size != len(self.sides):
            raise ValidationError("log_prices and sides must have equal length")
        if not np.all(np.isfinite(lp)):
            raise ValidationError("log-prices must be finite")
        bad = set(self.sides) - set(SIDES)
        if bad:
            raise ValidationError(f"unknown side labels {sorted(bad)}")
        lp.setflags(write=False)
        object.__setattr__(self, "log_prices", lp)
        object.__setattr__(self, "sides", tuple(self.sides))

    def __len__(self) -> int:
        return self.log_prices.size

    @property
    def records(self) -> list[tuple[float, str]]:
        return list(zip(self.log_prices.tolist(), self.sides))

    def side(self, which: str) -> TransactionSample:
        keep = np.array([s == which for s in self.sides], dtype=bool)
        return TransactionSample(self.log_prices[keep], tuple(which for _ in range(keep.sum())),
                                 f"{self.source}[{which}]")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["log_price", "side"])
        for p, s in self.records:
            w.writerow([repr(p), s])
        return buf.getvalue()


def parse_transactions(stream: TextIO | Iterable[str], source: str = "<stream>") -> TransactionSample:
    """Read ``log_price,side`` CSV.  Every bad row is reported, none dropped."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise EmptyInput("no header")
    if [h.strip().lower() for h in header] != ["log_price", "side"]:
        raise MalformedRow([(0, f"expected header 'log_price,side', got {','.join(header)!r}")])
    prices, sides, problems = [], [], []
    for i, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            problems.append((i, f"expected 2 fields, got {len(row)}"))
            continue
        raw_p, raw_s = row[0].strip(), row[1].strip().lower()
        try:
            p = float(raw_p)
        except ValueError:
            problems.append((i, f"log_price {raw_p!r} is not a number"))
            continue
        if not math.isfinite(p):
            problems.append((i, f"log_price {raw_p!r} is not finite"))
            continue
        if raw_s not in SIDES:
            problems.append((i, f"side {row[1]!r} is not buy/sell"))
            continue
        prices.append(p)
        sides.append(raw_s)
    if problems:
        raise MalformedRow(problems)
    if not prices:
        raise EmptyInput("no transaction records")
    return TransactionSample(np.array(prices), tuple(sides), source)


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    risk: float
    n: int
    se_mean: float

    def as_dict(self) -> dict:
        return {"mean": self.mean, "risk": self.risk, "n": self.n, "se_mean": self.se_mean}


def estimate_moments(s: TransactionSample) -> MomentEstimate:
    n = len(s)
    if n < 2:
        raise TooFewRecords(f"need at least 2 records, got {n}")
    mean = float(np.mean(s.log_prices))
    risk = float(np.var(s.log_prices, ddof=1))
    return MomentEstimate(mean, risk, n, math.sqrt(risk / n))


def fit_minimal_strategy(m_hat: float, r_hat: float, n: int = 0) -> Strategy:
    """Pure e_n with mean m_hat and variance r_hat, i.e. mu = (n + 1/2) / r_hat."""
    if not r_hat > 0:
        raise DegenerateRisk(f"risk must be positive, got {r_hat}")
    if n < 0:
        raise ValidationError("n must be >= 0")
    return Strategy.pure(n, (n + 0.5) / r_hat, m_hat)


def _inverse_cdf_table(s: Strategy, grid: GridSpec | None = None) -> tuple[np.ndarray, np.ndarray]:
    f = strategy_pdf(s, grid)
    x, v, h = f.nodes, f.values, f.spec.h
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * h * (v[1:] + v[:-1]))))
    cdf /= cdf[-1]
    # np.interp needs strictly increasing abscissae; flat tails carry no mass
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return cdf[keep], x[keep]


def sample_strategy(s: Strategy, count: int, seed: int, grid: GridSpec | None = None) -> TransactionSample:
    """Inverse-CDF draws from psi^2 (piecewise-linear CDF on the strategy grid)."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    cdf, x = _inverse_cdf_table(s, grid)
    u = np.random.default_rng(seed).random(count)
    draws = np.interp(u, cdf, x)
    return TransactionSample(draws, ("buy",) * count,
                             f"sample_strategy(generator={GENERATOR}, seed={seed}, count={count})")


@dataclass(frozen=True)
class CramerRaoReport:
    bound: float
    empirical: float
    trials: int
    seed: int
    n_per_trial: int
    fisher: float

    @property
    def ratio(self) -> float:
        return self.empirical / self.bound

    @property
    def satisfied(self) -> bool:
        return self.empirical >= self.bound * (1.0 - 3.0 / math.sqrt(self.trials))

    def as_dict(self) -> dict:
        return {"bound": self.bound, "empirical": self.empirical, "ratio": self.ratio,
                "trials": self.trials, "seed": self.seed}


def cramer_rao_monte_carlo(s: Strategy, n_per_trial: int, trials: int, seed: int) -> CramerRaoReport:
    """Variance of the sample-mean location estimator vs 1 / (n I_F).

    Trial t draws its uniforms from a generator seeded with ``seed + t``.
    """
    if trials < 100:
        raise ValidationError(f"need at least 100 trials, got {trials}")
    if n_per_trial < 1:
        raise ValidationError("n_per_trial must be >= 1")
    if s.pure_index is not None:
        fisher = fisher_information_closed(s).value
    else:
        fisher = fisher_information_grid(strategy_pdf(s)).value
    cdf, x = _inverse_cdf_table(s)
    u = np.stack([np.random.default_rng(seed + t).random(n_per_trial) for t in range(trials)])
    estimates = np.interp(u, cdf, x).mean(axis=1)
    empirical = float(np.var(estimates, ddof=1))
    return CramerRaoReport(1.0 / (n_per_trial * fisher), empirical, trials, seed, n_per_trial, fisher)
