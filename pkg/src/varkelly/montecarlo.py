"""Monte Carlo verification of the growth math.

Simulates the repeated game directly: each round multiplies the bankroll
by (1 + b * f) on a win (b drawn from the payoff distribution) or by
(1 - f) on a loss. Per-path growth rates (1/n) * log(X_n / X_0) estimate
the expected log growth, independently of the quadrature/bisection route.

Reproducibility contract: path k draws from a substream derived from
(seed, k), so results are bit-identical no matter how paths are batched
or ordered. ``grid_argmax`` scores every grid fraction against the same
draws (common random numbers), which makes the empirical argmax sharp
enough to compare against the solver at modest path counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .kelly import GameSpec


@dataclass(frozen=True)
class SimConfig:
    """Simulation shape: rounds per path, path count, fraction, seed."""

    n_rounds: int
    n_paths: int
    f: float
    seed: int
    x0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "n_rounds", int(self.n_rounds))
        object.__setattr__(self, "n_paths", int(self.n_paths))
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "x0", float(self.x0))
        if self.n_rounds < 1:
            raise ValueError(f"n_rounds must be >= 1, got {self.n_rounds}")
        if self.n_paths < 1:
            raise ValueError(f"n_paths must be >= 1, got {self.n_paths}")
        if not 0.0 <= self.f < 1.0:
            raise ValueError(f"betting fraction must lie in [0, 1), got {self.f}")
        if self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if not self.x0 > 0.0:
            raise ValueError(f"initial bankroll must be positive, got {self.x0}")


@dataclass(frozen=True, eq=False)
class SimResult:
    """Per-path growth rates plus summary statistics.

    std_growth uses the sample standard deviation (ddof=1); it is 0.0
    for a single path. Final bankrolls are always positive since f < 1.
    """

    growth_rates: np.ndarray
    mean_growth: float
    std_growth: float
    min_final: float
    max_final: float
    seed: int

    # Growth rates are exact (log-domain); final bankrolls are exp'd back
    # and saturate to inf / 0.0 when they leave float range at large n.


class GridScan(NamedTuple):
    """mean/std growth across the fraction grid (common random numbers)."""

    fractions: np.ndarray
    mean_growth: np.ndarray
    std_growth: np.ndarray


def _path_rng(seed: int, k: int) -> np.random.Generator:
    """Substream for path k; depends only on (seed, k), not execution order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(k,)))


def _draw_path(game: GameSpec, n_rounds: int, seed: int, k: int):
    """All randomness for one path: loss count and win payoffs.

    The win/loss mask is drawn first and payoffs only for the winning
    rounds, so the draws are identical for every betting fraction.
    """
    rng = _path_rng(seed, k)
    wins = rng.random(n_rounds) < game.p
    n_wins = int(wins.sum())
    payoffs = game.dist.sample(rng, n_wins) if n_wins else np.empty(0)
    return n_rounds - n_wins, np.asarray(payoffs, dtype=float)


def _log_wealth_ratio(f: float, n_losses: int, payoffs: np.ndarray) -> float:
    """log(X_n / X_0) for one path at fraction f, accumulated in log domain."""
    if f == 0.0:
        return 0.0
    return float(np.log1p(f * payoffs).sum()) + n_losses * math.log1p(-f)


def _std(rates: np.ndarray) -> float:
    return float(rates.std(ddof=1)) if len(rates) > 1 else 0.0


def simulate(game: GameSpec, cfg: SimConfig) -> SimResult:
    """Play n_paths independent paths of n_rounds rounds at fraction cfg.f."""
    rates = np.empty(cfg.n_paths)
    log_ratios = np.empty(cfg.n_paths)
    for k in range(cfg.n_paths):
        n_losses, payoffs = _draw_path(game, cfg.n_rounds, cfg.seed, k)
        log_ratios[k] = _log_wealth_ratio(cfg.f, n_losses, payoffs)
        rates[k] = log_ratios[k] / cfg.n_rounds
    with np.errstate(over="ignore", under="ignore"):
        finals = cfg.x0 * np.exp(log_ratios)
    rates.setflags(write=False)
    return SimResult(
        growth_rates=rates,
        mean_growth=float(rates.mean()),
        std_growth=_std(rates),
        min_final=float(finals.min()),
        max_final=float(finals.max()),
        seed=cfg.seed,
    )


def _grid_fractions(grid_size: int) -> np.ndarray:
    return np.arange(grid_size + 1) / (grid_size + 1)


def grid_scan(
    game: GameSpec,
    grid_size: int,
    *,
    n_rounds: int,
    n_paths: int,
    seed: int,
) -> GridScan:
    """Simulate every grid fraction f_j = j / (grid_size + 1), j = 0..grid_size,
    reusing the same per-path draws for all fractions (common random numbers).

    Column j is bit-identical to simulate() at f_j with the same seed.
    """
    grid_size = int(grid_size)
    if grid_size < 3:
        raise ValueError(f"grid_size must be >= 3, got {grid_size}")
    base = SimConfig(n_rounds=n_rounds, n_paths=n_paths, f=0.0, seed=seed)
    fs = _grid_fractions(grid_size)
    rates = np.empty((len(fs), base.n_paths))
    for k in range(base.n_paths):
        n_losses, payoffs = _draw_path(game, base.n_rounds, base.seed, k)
        # (n_f, n_wins) table of per-round log returns, summed per fraction.
        col = np.log1p(np.outer(fs, payoffs)).sum(axis=1) + n_losses * np.log1p(-fs)
        rates[:, k] = col / base.n_rounds
    rates[fs == 0.0, :] = 0.0
    means = rates.mean(axis=1)
    stds = np.array([_std(row) for row in rates])
    fs.setflags(write=False)
    means.setflags(write=False)
    stds.setflags(write=False)
    return GridScan(fractions=fs, mean_growth=means, std_growth=stds)


def grid_argmax(
    game: GameSpec,
    grid_size: int,
    *,
    n_rounds: int,
    n_paths: int,
    seed: int,
) -> float:
    """Grid fraction with the largest empirical mean growth.

    For favorable games with enough rounds this lands within one grid
    step of the solver's optimum; for unfavorable games it returns 0.0.
    """
    scan = grid_scan(game, grid_size, n_rounds=n_rounds, n_paths=n_paths, seed=seed)
    return float(scan.fractions[int(np.argmax(scan.mean_growth))])
