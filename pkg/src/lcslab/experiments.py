"""Block-insertion experiments: gap tables, resampling gains, event rates.

A trial draws the two strings from per-trial Philox streams, measures LCS
lengths with the word-parallel kernel and gap counts with the extremal DP,
and records everything needed to recompute its event flags.  Trials are
independent, so they can run across processes; aggregation happens in trial
order in the parent, which keeps output identical for any job count.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .blocks import (
    MAXIMIZE_GAPS,
    MINIMIZE_GAPS,
    OBJECTIVES,
    BlockSpec,
    extremal_block_gaps,
    find_natural_block,
)
from .errors import InputError
from .estimators import DEFAULT_CONFIDENCE, Estimate, bernoulli_estimate
from .generators import RngSeed, _as_seed, block_length_for, generator, round_half_up
from .lcs import _lcs_length_bitparallel_arrays as _lcs_arrays
from .sequences import Alphabet, SymbolSequence

# Simulation consensus values for the limiting mean-LCS constant, used for
# heuristic predictions and default event thresholds (precision about 0.01).
DEFAULT_GAMMA_STAR = {2: 0.812, 3: 0.717, 4: 0.654, 5: 0.61, 7: 0.54}

EVENTS = ("E", "K", "G", "H")
BLOCK_MODES = ("inserted", "natural", "natural-at-least")

_NATURAL_MAX_ATTEMPTS = 100_000
_PROGRESS_DEFAULT_EVERY = 10


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a block-insertion experiment."""

    k: int
    d: int = 500
    beta: float = 0.8
    alpha: float = 0.6
    trials: int = 100
    seed: RngSeed | int = 0
    gamma_a: float | None = None
    c_h: float = 0.15
    block_mode: str = "inserted"
    block_symbol: int = 0
    objective: str = MAXIMIZE_GAPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", _as_seed(self.seed))
        if self.k < 2:
            raise InputError(f"k must be >= 2, got {self.k}")
        if self.d < 4:
            raise InputError(f"d must be >= 4, got {self.d}")
        if not 0.5 < self.alpha < self.beta < 1.0:
            raise InputError(
                f"need 1/2 < alpha < beta < 1, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.trials < 1:
            raise InputError(f"trials must be >= 1, got {self.trials}")
        if self.block_mode not in BLOCK_MODES:
            raise InputError(f"block_mode must be one of {BLOCK_MODES}")
        if self.objective not in OBJECTIVES:
            raise InputError(f"objective must be one of {OBJECTIVES}")
        if not 0 <= self.block_symbol < self.k:
            raise InputError(f"block_symbol must lie in [0, {self.k})")
        c_h_cap = 3 * DEFAULT_GAMMA_STAR[2] / 2 - 1
        if not 0.0 < self.c_h < c_h_cap:
            raise InputError(f"c_h must lie in (0, {c_h_cap:.3f}), got {self.c_h}")
        if self.gamma_a is not None:
            cap = DEFAULT_GAMMA_STAR.get(self.k)
            if self.gamma_a <= 0 or (cap is not None and self.gamma_a >= cap):
                raise InputError(
                    f"gamma_a must lie in (0, {cap}) for k={self.k}, got {self.gamma_a}"
                )

    def resolved_gamma_a(self) -> float:
        if self.gamma_a is not None:
            return self.gamma_a
        star = DEFAULT_GAMMA_STAR.get(self.k)
        if star is None:
            raise InputError(
                f"no default mean-LCS constant for k={self.k}; set gamma_a explicitly"
            )
        return star - 0.05


@dataclass(frozen=True)
class TrialRecord:
    """Everything measured in one trial; flags recomputable from the lengths."""

    trial_index: int
    lcs_xy: int
    lcs_xstar_y: int
    gaps_max: int | None = None
    gaps_min: int | None = None
    e_flag: bool | None = None
    k_flag: bool | None = None
    g_flag: bool | None = None
    h_flag: bool | None = None
    lcs_block_excised: int | None = None
    lcs_prefix_excised: int | None = None
    resamples: int = 0

    @property
    def delta(self) -> int:
        return self.lcs_xstar_y - self.lcs_xy


@dataclass(frozen=True)
class TableRow:
    """One summary cell: gap statistics and resampling gain for (k, ell, n)."""

    k: int
    ell: int
    n: int
    trials: int
    mean_gaps: float | None
    median_gaps: float | None
    gap_proportion: float | None
    mean_delta: float
    heuristic_delta: float | None


@dataclass(frozen=True)
class TrialRun:
    """Per-trial records plus their summary row."""

    records: tuple[TrialRecord, ...]
    row: TableRow
    natural_resamples: int = 0


def heuristic_delta(k: int, ell: int, gamma_star_hat: float) -> float:
    """Predicted LCS gain from replacing a constant block of length ell.

    Binary strings free the block plus the double-length stretch it consumed,
    giving (3 gamma/2 - 1) ell; with three or more letters the block sat on
    gaps, giving (gamma/2) ell.
    """
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if ell < 0:
        raise InputError(f"ell must be >= 0, got {ell}")
    if k == 2:
        return (3.0 * gamma_star_hat / 2.0 - 1.0) * ell
    return gamma_star_hat / 2.0 * ell


def _resolve_n_ell(
    cfg: ExperimentConfig, n_override: int | None, ell_override: int | None
) -> tuple[int, int]:
    n = int(n_override) if n_override is not None else 2 * cfg.d
    if n < 2 or n % 2:
        raise InputError(f"string length n must be a positive even integer, got {n}")
    if ell_override is not None:
        ell = int(ell_override)
    else:
        ell = block_length_for(n // 2, cfg.beta)
    if not 0 < ell <= n:
        raise InputError(f"block length must lie in [1, {n}], got {ell}")
    return n, ell


@dataclass(frozen=True)
class _TrialSpec:
    mode: str  # "gaps" | "delta" | "events"
    k: int
    n: int
    ell: int
    master: int
    stream: int
    trial: int
    block_mode: str
    block_symbol: int
    m_alpha: int = 0
    k_threshold: float = 0.0
    h_threshold: float = 0.0


def _draw_strings(
    spec: _TrialSpec,
) -> tuple[np.ndarray, np.ndarray, BlockSpec, np.ndarray, int]:
    k, n, ell = spec.k, spec.n, spec.ell
    path = (spec.master, spec.stream, spec.trial)
    y = generator(*path, 1).integers(0, k, size=n, dtype=np.int64)
    resamples = 0
    if spec.block_mode == "inserted":
        x = generator(*path, 0).integers(0, k, size=n, dtype=np.int64)
        block = BlockSpec(start=(n - ell) // 2, length=ell)
        x_star = x.copy()
        x[block.start : block.stop] = spec.block_symbol
    else:
        accept_longer = spec.block_mode == "natural-at-least"
        alphabet = Alphabet(k)
        block = None
        for attempt in range(_NATURAL_MAX_ATTEMPTS):
            x = generator(*path, 0, attempt).integers(0, k, size=n, dtype=np.int64)
            block = find_natural_block(
                SymbolSequence(x, alphabet), ell, accept_longer=accept_longer
            )
            if block is not None:
                break
            resamples += 1
        if block is None:
            raise InputError(
                f"no natural block of length {ell} found in "
                f"{_NATURAL_MAX_ATTEMPTS} resampled strings of length {n}"
            )
        x_star = x.copy()
    fill = generator(*path, 2).integers(0, k, size=ell, dtype=np.int64)
    x_star[block.start : block.stop] = fill
    return x, y, block, x_star, resamples


def _run_one_trial(spec: _TrialSpec) -> TrialRecord:
    x, y, block, x_star, resamples = _draw_strings(spec)
    lcs_xy = _lcs_arrays(x, y)
    lcs_star = _lcs_arrays(x_star, y)
    if spec.mode == "gaps":
        alphabet = Alphabet(spec.k)
        xs = SymbolSequence(x, alphabet)
        ys = SymbolSequence(y, alphabet)
        g_max = extremal_block_gaps(xs, ys, block, MAXIMIZE_GAPS)
        g_min = extremal_block_gaps(xs, ys, block, MINIMIZE_GAPS)
        return TrialRecord(
            trial_index=spec.trial,
            lcs_xy=lcs_xy,
            lcs_xstar_y=lcs_star,
            gaps_max=g_max.gaps,
            gaps_min=g_min.gaps,
            resamples=resamples,
        )
    if spec.mode == "events":
        excised = np.concatenate([x[: block.start], x[block.stop :]])
        prefix_excised = np.concatenate([x[: block.start], x[block.start + spec.m_alpha :]])
        lcs_excised = _lcs_arrays(excised, y)
        lcs_prefix = _lcs_arrays(prefix_excised, y)
        delta = lcs_star - lcs_xy
        return TrialRecord(
            trial_index=spec.trial,
            lcs_xy=lcs_xy,
            lcs_xstar_y=lcs_star,
            e_flag=lcs_excised + spec.m_alpha > lcs_xy,
            k_flag=delta >= spec.k_threshold,
            g_flag=lcs_xy > lcs_prefix,
            h_flag=delta >= spec.h_threshold,
            lcs_block_excised=lcs_excised,
            lcs_prefix_excised=lcs_prefix,
            resamples=resamples,
        )
    return TrialRecord(
        trial_index=spec.trial,
        lcs_xy=lcs_xy,
        lcs_xstar_y=lcs_star,
        resamples=resamples,
    )


ProgressFn = Callable[[int, int], None]


def _run_trials(
    specs: Sequence[_TrialSpec], jobs: int, progress: ProgressFn | None
) -> list[TrialRecord]:
    records: list[TrialRecord] = []
    if jobs <= 1:
        for i, spec in enumerate(specs):
            records.append(_run_one_trial(spec))
            if progress is not None:
                progress(i + 1, len(specs))
        return records
    chunk = max(1, len(specs) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for i, rec in enumerate(pool.map(_run_one_trial, specs, chunksize=chunk)):
            records.append(rec)
            if progress is not None:
                progress(i + 1, len(specs))
    return records


def _lower_median(values: Sequence[int]) -> float:
    ordered = sorted(values)
    return float(ordered[(len(ordered) - 1) // 2])


def _summarize(
    cfg: ExperimentConfig,
    n: int,
    ell: int,
    records: Sequence[TrialRecord],
    with_gaps: bool,
) -> TableRow:
    deltas = [r.delta for r in records]
    mean_delta = sum(deltas) / len(records)
    star = DEFAULT_GAMMA_STAR.get(cfg.k)
    heuristic = heuristic_delta(cfg.k, ell, star) if star is not None else None
    if with_gaps:
        gaps = [
            r.gaps_max if cfg.objective == MAXIMIZE_GAPS else r.gaps_min
            for r in records
        ]
        mean_gaps = sum(gaps) / len(gaps)
        return TableRow(
            k=cfg.k,
            ell=ell,
            n=n,
            trials=len(records),
            mean_gaps=mean_gaps,
            median_gaps=_lower_median(gaps),
            gap_proportion=mean_gaps / ell,
            mean_delta=mean_delta,
            heuristic_delta=heuristic,
        )
    return TableRow(
        k=cfg.k,
        ell=ell,
        n=n,
        trials=len(records),
        mean_gaps=None,
        median_gaps=None,
        gap_proportion=None,
        mean_delta=mean_delta,
        heuristic_delta=heuristic,
    )


def _trial_specs(
    cfg: ExperimentConfig, mode: str, n: int, ell: int, **extra: object
) -> list[_TrialSpec]:
    seed = cfg.seed
    return [
        _TrialSpec(
            mode=mode,
            k=cfg.k,
            n=n,
            ell=ell,
            master=seed.master,
            stream=seed.stream,
            trial=t,
            block_mode=cfg.block_mode,
            block_symbol=cfg.block_symbol,
            **extra,
        )
        for t in range(cfg.trials)
    ]


def run_gap_trials(
    cfg: ExperimentConfig,
    n_override: int | None = None,
    ell_override: int | None = None,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> TrialRun:
    """Extremal gap counts of the block over seeded trials.

    Each trial records the gap count under both tie-breaking objectives; the
    summary row aggregates the configured one (default: maximum gaps).  In
    the natural block modes, strings without a qualifying run are resampled
    and the resample count is reported.
    """
    n, ell = _resolve_n_ell(cfg, n_override, ell_override)
    records = _run_trials(_trial_specs(cfg, "gaps", n, ell), jobs, progress)
    return TrialRun(
        records=tuple(records),
        row=_summarize(cfg, n, ell, records, with_gaps=True),
        natural_resamples=sum(r.resamples for r in records),
    )


def run_delta_trials(
    cfg: ExperimentConfig,
    n_override: int | None = None,
    ell_override: int | None = None,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> TrialRun:
    """LCS gain from replacing the constant block with iid symbols."""
    n, ell = _resolve_n_ell(cfg, n_override, ell_override)
    records = _run_trials(_trial_specs(cfg, "delta", n, ell), jobs, progress)
    return TrialRun(
        records=tuple(records),
        row=_summarize(cfg, n, ell, records, with_gaps=False),
        natural_resamples=sum(r.resamples for r in records),
    )


@dataclass(frozen=True)
class EventRun:
    """Event frequencies for one configuration, with per-trial records."""

    records: tuple[TrialRecord, ...]
    estimates: dict[str, Estimate]
    ell: int
    m_alpha: int
    k_threshold: float
    h_threshold: float


def run_event_trials(
    cfg: ExperimentConfig,
    confidence: float = DEFAULT_CONFIDENCE,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> EventRun:
    """Estimate all four block events on the inserted-block model.

    E: excising the whole block costs less than d**alpha (block mostly on
    gaps).  G: excising d**alpha block symbols already costs something (block
    mostly on symbols).  K and H: the gain from resampling the block clears
    the three-or-more-letter and binary thresholds respectively.
    """
    n = 2 * cfg.d
    ell = block_length_for(cfg.d, cfg.beta)
    if not 0 < ell <= n:
        raise InputError(f"block length {ell} invalid for d={cfg.d}")
    m_alpha = round_half_up(cfg.d**cfg.alpha)
    if not 0 < m_alpha <= ell:
        raise InputError(
            f"d**alpha rounds to {m_alpha}, outside the block length {ell}"
        )
    k_threshold = cfg.resolved_gamma_a() / 2.0 * ell - m_alpha
    h_threshold = cfg.c_h * ell
    # Events are defined on the inserted-block model regardless of block_mode.
    base = replace(cfg, block_mode="inserted")
    specs = _trial_specs(
        base,
        "events",
        n,
        ell,
        m_alpha=m_alpha,
        k_threshold=k_threshold,
        h_threshold=h_threshold,
    )
    records = _run_trials(specs, jobs, progress)
    flags = {
        "E": [r.e_flag for r in records],
        "K": [r.k_flag for r in records],
        "G": [r.g_flag for r in records],
        "H": [r.h_flag for r in records],
    }
    estimates = {
        ev: bernoulli_estimate(sum(v), len(v), confidence) for ev, v in flags.items()
    }
    return EventRun(
        records=tuple(records),
        estimates=estimates,
        ell=ell,
        m_alpha=m_alpha,
        k_threshold=k_threshold,
        h_threshold=h_threshold,
    )


def estimate_event_probability(
    event: str,
    cfg: ExperimentConfig,
    confidence: float = DEFAULT_CONFIDENCE,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> Estimate:
    """Empirical frequency of one of the events E, K, G, H."""
    ev = event.upper()
    if ev not in EVENTS:
        raise InputError(f"event must be one of {EVENTS}, got {event!r}")
    return run_event_trials(cfg, confidence, jobs, progress).estimates[ev]


def run_table_suite(
    cells: Iterable[tuple[int, int]],
    cfg: ExperimentConfig,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> tuple[TableRow, ...]:
    """Gap/delta summary rows for (k, ell) cells.

    String length follows the table protocol: 1000 for blocks up to 100,
    4000 beyond, unless the caller runs the cells individually with explicit
    overrides.
    """
    rows = []
    for i, (k, ell) in enumerate(cells):
        n = 1000 if ell <= 100 else 4000
        seed = cfg.seed
        cell_cfg = replace(cfg, k=k, seed=RngSeed(seed.master, seed.stream + i))
        run = run_gap_trials(
            cell_cfg, n_override=n, ell_override=ell, jobs=jobs, progress=progress
        )
        rows.append(run.row)
    return tuple(rows)


# --- emission ---------------------------------------------------------------

TRIAL_CSV_COLUMNS = (
    "trial_index",
    "lcs_xy",
    "lcs_xstar_y",
    "gaps_max",
    "gaps_min",
    "e_flag",
    "k_flag",
    "g_flag",
    "h_flag",
)

TABLE_CSV_COLUMNS = (
    "k",
    "ell",
    "n",
    "trials",
    "mean_gaps",
    "median_gaps",
    "gap_proportion",
    "mean_delta",
    "heuristic_delta",
)


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def trial_records_to_csv(records: Sequence[TrialRecord]) -> str:
    lines = [",".join(TRIAL_CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(_cell(getattr(r, c)) for c in TRIAL_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def table_rows_to_csv(rows: Sequence[TableRow]) -> str:
    lines = [",".join(TABLE_CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_cell(getattr(row, c)) for c in TABLE_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def trial_records_to_json(records: Sequence[TrialRecord]) -> list[dict]:
    return [{c: getattr(r, c) for c in TRIAL_CSV_COLUMNS} for r in records]


def table_row_to_json(row: TableRow) -> dict:
    return {c: getattr(row, c) for c in TABLE_CSV_COLUMNS}


def to_json_text(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
