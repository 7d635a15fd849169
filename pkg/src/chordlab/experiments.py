"""Monte Carlo harness: replica-parallel experiments with frozen randomness.

Replica r always draws from the stream derived for index r, so results are
a pure function of (kind, n, replicas, seed, params): chunking and worker
count only affect scheduling.  All aggregation is integer counting; floats
appear only in the final report assembly.  Reference laws are evaluated
in-run from the closed-forms module, never hard-coded.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import CostCapExceededError, InvalidConfigError
from .formulas import (
    degree_cdf_limit,
    mean_Zk,
    poisson_pmf,
    second_factorial_Zk,
)
from .sampling import (
    Seed,
    continuous_draw_bounds,
    discrete_draw_bounds,
    replica_rng,
    uniform_draw_bounds,
)
from .stats import chi_square_gof

KINDS = (
    "degree_cdf",
    "simple_chords",
    "length_class",
    "joint_lengths",
    "monolithic_fraction",
    "kcore_vs_len",
    "zk_concentration",
    "scc_trivial",
    "len_strong_conn",
    "balanced_clique",
    "evolution_switching",
    "model_equivalence",
    "extremal_scaling",
)

#: Refuse runs whose estimated elementary-operation count exceeds this
#: unless the config opts out.  Sized to admit the acceptance workloads.
DEFAULT_COST_CAP = 5e10

SCHEMA = "chordlab-report/1"


@dataclass
class ExperimentConfig:
    kind: str
    n: int
    replicas: int
    seed: int
    params: dict = field(default_factory=dict)
    workers: int = 1
    chunk_size: int | None = None
    enforce_cost_cap: bool = True

    def __post_init__(self) -> None:
        Seed(self.seed)  # range check
        if self.kind not in KINDS:
            raise InvalidConfigError(f"unknown experiment kind {self.kind!r}")
        if self.n < 1:
            raise InvalidConfigError(f"n must be >= 1, got {self.n}")
        if self.replicas < 1:
            raise InvalidConfigError(f"replicas must be >= 1, got {self.replicas}")
        if self.workers < 1:
            raise InvalidConfigError(f"workers must be >= 1, got {self.workers}")
        _validate_params(self.kind, self.n, self.params)

    def echo(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "replicas": self.replicas,
            "seed": self.seed,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "rng": "PCG64 per replica; stream = splitmix64(seed + (replica+1)*golden)",
        }


def _validate_params(kind: str, n: int, params: dict) -> None:
    if kind == "length_class":
        j = params.get("j", 3)
        if not 0 <= j <= n - 2:
            raise InvalidConfigError(f"length_class needs 0 <= j <= n-2, got {j}")
    if kind == "joint_lengths":
        k = params.get("k", 2)
        if not 0 <= k <= min(8, n - 2):
            raise InvalidConfigError(f"joint_lengths needs 0 <= k <= min(8, n-2), got {k}")
    if kind == "kcore_vs_len":
        k = params.get("k", 3)
        if not 1 <= k <= n:
            raise InvalidConfigError(f"kcore_vs_len needs 1 <= k <= n, got {k}")
    if kind == "zk_concentration":
        k = params.get("k", 3)
        if not 1 <= k <= n - 1:
            raise InvalidConfigError(f"zk_concentration needs 1 <= k <= n-1, got {k}")
    if kind == "len_strong_conn":
        grid = params.get("k_grid") or _default_k_grid(n)
        if not all(1 <= k <= n for k in grid):
            raise InvalidConfigError(f"k_grid entries must lie in [1, {n}]")
    if kind == "balanced_clique":
        m = params.get("m") or _default_balanced_m(n)
        if not 1 <= m <= n:
            raise InvalidConfigError(f"balanced_clique needs 1 <= m <= n, got {m}")
    if kind == "evolution_switching":
        m0 = params.get("m0", 50)
        if not 1 <= m0 <= n:
            raise InvalidConfigError(f"evolution_switching needs 1 <= m0 <= n, got {m0}")
    if kind == "model_equivalence" and n > 6:
        raise InvalidConfigError(
            "model_equivalence joint support explodes; capped at n <= 6"
        )
    if kind == "degree_cdf":
        for b in params.get("b_grid", ()):  # default grid always valid
            if not 0 <= b <= 0.5:
                raise InvalidConfigError(f"b={b} outside [0, 0.5]")


def _default_k_grid(n: int) -> list[int]:
    k = max(1, round(2 * math.log(n)))
    return sorted({max(1, k // 2), k, min(n, 2 * k)})


def _default_balanced_m(n: int, eps: float = 0.1) -> int:
    if n < 3:
        return 1
    return max(1, math.floor(n**0.5 / ((2 + eps) * math.log(n) ** 0.5)))


DEFAULT_B_GRID = tuple(round(0.05 * i, 2) for i in range(1, 10))


# ------------------------------------------------------------ cost model


def estimate_cost(cfg: ExperimentConfig) -> float:
    n, r = cfg.n, cfg.replicas
    logn = max(1.0, math.log2(max(2, n)))
    per = {
        "degree_cdf": 2 * n * logn,
        "simple_chords": 2 * n * logn,
        "length_class": 2 * n * logn,
        "joint_lengths": 2 * n * logn,
        "monolithic_fraction": n * logn + 4 * n,
        "kcore_vs_len": 3 * n * logn + 2 * n,
        "zk_concentration": 2 * n * logn,
        "scc_trivial": n * logn + n * n / 6,
        "len_strong_conn": n * logn + n * n / 2,
        "balanced_clique": n * logn + n,
        "evolution_switching": 3 * n * n,
        "model_equivalence": 4 * n * n * n,
        "extremal_scaling": 2 * n * n + n * n / 6 * logn,
    }[cfg.kind]
    return r * per


# ------------------------------------------------------- chunk workers
#
# Each worker consumes a [start, stop) range of global replica indices and
# returns integer partial aggregates; merging is commutative except for
# sample lists, which carry their start index and are ordered afterward.


def _uniform_rows(master: int, n: int, start: int, stop: int) -> np.ndarray:
    bounds = uniform_draw_bounds(n)
    rows = np.empty((stop - start, n), dtype=np.int64)
    for i, rep in enumerate(range(start, stop)):
        rows[i] = replica_rng(master, rep).integers(0, bounds, dtype=np.int64)
    return rows


def _chunk_degree_cdf(master, n, params, start, stop):
    degs = _kernels.batch_deg_c1(2 * n, _uniform_rows(master, n, start, stop))
    return {"deg_hist": np.bincount(degs, minlength=n)}


def _length_chunk(master, n, jmax, start, stop):
    mat = _kernels.batch_length_counts(
        2 * n, _uniform_rows(master, n, start, stop), jmax
    )
    return {"lmat_hists": [np.bincount(mat[:, j], minlength=1) for j in range(jmax + 1)]}


def _chunk_simple_chords(master, n, params, start, stop):
    return _length_chunk(master, n, 0, start, stop)


def _chunk_length_class(master, n, params, start, stop):
    return _length_chunk(master, n, params.get("j", 3), start, stop)


def _chunk_joint_lengths(master, n, params, start, stop):
    k = params.get("k", 2)
    mat = _kernels.batch_length_counts(
        2 * n, _uniform_rows(master, n, start, stop), k
    )
    joint: dict[tuple, int] = {}
    for row in mat.tolist():
        key = tuple(row)
        joint[key] = joint.get(key, 0) + 1
    sums = mat.sum(axis=0)
    cross = mat.T @ mat  # includes squares on the diagonal
    return {"joint": joint, "sums": sums, "cross": cross}


def _chunk_monolithic(master, n, params, start, stop):
    flags = _kernels.batch_monolithic(2 * n, _uniform_rows(master, n, start, stop))
    return {"non_mono": int(np.count_nonzero(flags == 0))}


def _chunk_kcore(master, n, params, start, stop):
    k = params.get("k", 3)
    removed, equal = _kernels.batch_kcore(
        2 * n, _uniform_rows(master, n, start, stop), k
    )
    eps = params.get("eps", 0.2)
    within = np.count_nonzero(np.abs(removed / k - 1.0) <= eps)
    return {
        "removed_hist": np.bincount(removed, minlength=1),
        "equal": int(np.count_nonzero(equal)),
        "within_eps": int(within),
    }


def _chunk_zk(master, n, params, start, stop):
    k = params.get("k", 3)
    mat = _kernels.batch_length_counts(
        2 * n, _uniform_rows(master, n, start, stop), k - 1
    )
    z = mat.sum(axis=1)
    return {"z_hist": np.bincount(z, minlength=1)}


def _chunk_scc_trivial(master, n, params, start, stop):
    bounds = uniform_draw_bounds(n)
    trivial_hist: dict[int, int] = {}
    nontrivial_hist: dict[int, int] = {}
    giant_sum = 0
    for rep in range(start, stop):
        rng = replica_rng(master, rep)
        row = rng.integers(0, bounds, dtype=np.int64)
        partner = _kernels.sample_partner(2 * n, row)
        eu, ev = _kernels.crossing_edges(partner)
        if eu.shape[0]:
            idx = np.lexsort((ev, eu))
            eu, ev = np.ascontiguousarray(eu[idx]), np.ascontiguousarray(ev[idx])
        bits = rng.integers(0, 2, size=eu.shape[0], dtype=np.uint8)
        trivial, nontrivial, giant = _kernels.scc_stats(n, eu, ev, bits)
        trivial = int(trivial)
        nontrivial = int(nontrivial)
        trivial_hist[trivial] = trivial_hist.get(trivial, 0) + 1
        nontrivial_hist[nontrivial] = nontrivial_hist.get(nontrivial, 0) + 1
        giant_sum += int(giant)
    return {
        "trivial_hist": trivial_hist,
        "nontrivial_hist": nontrivial_hist,
        "giant_sum": giant_sum,
    }


def _chunk_len_strong_conn(master, n, params, start, stop):
    k_grid = list(params.get("k_grid") or _default_k_grid(n))
    bounds = uniform_draw_bounds(n)
    two_n = 2 * n
    success = {k: 0 for k in k_grid}
    for rep in range(start, stop):
        rng = replica_rng(master, rep)
        row = rng.integers(0, bounds, dtype=np.int64)
        partner = _kernels.sample_partner(two_n, row)
        eu, ev = _kernels.crossing_edges(partner)
        if eu.shape[0]:
            idx = np.lexsort((ev, eu))
            eu, ev = np.ascontiguousarray(eu[idx]), np.ascontiguousarray(ev[idx])
        bits = rng.integers(0, 2, size=eu.shape[0], dtype=np.uint8)
        src = np.where(bits.astype(bool), eu, ev)
        dst = np.where(bits.astype(bool), ev, eu)
        opens = np.flatnonzero(partner > np.arange(two_n))
        inner = partner[opens] - opens - 1
        lengths = np.minimum(inner, two_n - 2 - inner)
        for k in k_grid:
            keep = lengths >= k
            size = int(np.count_nonzero(keep))
            if size <= 1:
                success[k] += 1
                continue
            emask = keep[src] & keep[dst]
            remap = np.full(n, -1, dtype=np.int64)
            remap[np.flatnonzero(keep)] = np.arange(size)
            offs, targets = _kernels.build_csr(size, remap[src[emask]], remap[dst[emask]])
            _labels, ncomp = _kernels.tarjan_scc(size, offs, targets)
            if int(ncomp) == 1:
                success[k] += 1
    return {"success": success}


def _chunk_balanced_clique(master, n, params, start, stop):
    m = params.get("m") or _default_balanced_m(n)
    r = n // m
    bounds = uniform_draw_bounds(n)
    found = 0
    for rep in range(start, stop):
        rng = replica_rng(master, rep)
        partner = _kernels.sample_partner(2 * n, rng.integers(0, bounds, dtype=np.int64))
        ok = True
        for t in range(m):
            lo = t * r
            opp_lo = (t + m) * r
            seg = partner[lo : lo + r]
            if not np.any((seg >= opp_lo) & (seg < opp_lo + r)):
                ok = False
                break
        if ok:
            found += 1
    return {"found": found}


def _chunk_evolution_switching(master, n, params, start, stop):
    n_run = n + 1  # one step past n so switching at n is defined
    bounds = continuous_draw_bounds(n_run)
    rows = np.empty((stop - start, n_run - 1), dtype=np.int64)
    for i, rep in enumerate(range(start, stop)):
        rows[i] = replica_rng(master, rep).integers(0, bounds, dtype=np.int64)
    mono = _kernels.batch_switching(n_run, rows)
    m0 = params.get("m0", 50)
    switches = (mono[:, 1:n_run] == 1) & (mono[:, 2 : n_run + 1] == 0)
    switch_counts = switches.sum(axis=0)  # index m-1 for m in 1..n
    all_mono = np.all(mono[:, m0 : n + 1] == 1, axis=1)
    return {
        "switch_counts": switch_counts.astype(np.int64),
        "mono_counts": mono[:, 1 : n + 1].sum(axis=0).astype(np.int64),
        "all_mono": int(np.count_nonzero(all_mono)),
    }


def _chunk_model_equivalence(master, n, params, start, stop):
    b = stop - start
    cont_bounds = continuous_draw_bounds(n)
    disc_bounds = discrete_draw_bounds(n)
    cont = np.empty((b, max(0, n - 1)), dtype=np.int64)
    disc = np.empty((b, 2 * n - 1), dtype=np.int64)
    for i, rep in enumerate(range(start, stop)):
        cont[i] = replica_rng(master, 2 * rep).integers(0, cont_bounds, dtype=np.int64)
        disc[i] = replica_rng(master, 2 * rep + 1).integers(0, disc_bounds, dtype=np.int64)
    cj = _kernels.batch_continuous_joint(n, cont)
    dj = _kernels.batch_discrete_joint(n, disc)
    cont_counts: dict[tuple, int] = {}
    disc_counts: dict[tuple, int] = {}
    for row in cj.tolist():
        key = tuple(row)
        cont_counts[key] = cont_counts.get(key, 0) + 1
    for row in dj.tolist():
        key = tuple(row)
        disc_counts[key] = disc_counts.get(key, 0) + 1
    return {"cont": cont_counts, "disc": disc_counts}


def _chunk_extremal(master, n, params, start, stop):
    with_alpha = bool(params.get("with_alpha", True))
    omega, alpha, nest = _kernels.batch_extremal(
        2 * n, _uniform_rows(master, n, start, stop), with_alpha
    )
    return {
        "start": start,
        "omega": omega.tolist(),
        "alpha": alpha.tolist(),
        "nest": nest.tolist(),
    }


_CHUNKERS: dict[str, Callable] = {
    "degree_cdf": _chunk_degree_cdf,
    "simple_chords": _chunk_simple_chords,
    "length_class": _chunk_length_class,
    "joint_lengths": _chunk_joint_lengths,
    "monolithic_fraction": _chunk_monolithic,
    "kcore_vs_len": _chunk_kcore,
    "zk_concentration": _chunk_zk,
    "scc_trivial": _chunk_scc_trivial,
    "len_strong_conn": _chunk_len_strong_conn,
    "balanced_clique": _chunk_balanced_clique,
    "evolution_switching": _chunk_evolution_switching,
    "model_equivalence": _chunk_model_equivalence,
    "extremal_scaling": _chunk_extremal,
}


def _run_chunk(kind: str, master: int, n: int, params: dict, start: int, stop: int):
    return _CHUNKERS[kind](master, n, params, start, stop)


def _merge(parts: list[dict]) -> dict:
    """Commutative merge of partial aggregates (sample lists keep order
    via their start index)."""
    out: dict = {}
    for part in sorted(parts, key=lambda p: p.get("start", 0)):
        for key, val in part.items():
            if key == "start":
                continue
            if key not in out:
                out[key] = val
            elif isinstance(val, dict):
                for k2, v2 in val.items():
                    out[key][k2] = out[key].get(k2, 0) + v2
            elif isinstance(val, list) and val and isinstance(val[0], np.ndarray):
                out[key] = [_add_hist(a, b) for a, b in zip(out[key], val)]
            elif isinstance(val, list):
                out[key] = out[key] + val
            elif isinstance(val, np.ndarray):
                out[key] = _add_hist(out[key], val)
            else:
                out[key] = out[key] + val
    return out


def _add_hist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape == b.shape:
        return a + b
    big = max(a.shape[0], b.shape[0])
    out = np.zeros(big, dtype=np.int64)
    out[: a.shape[0]] += a
    out[: b.shape[0]] += b
    return out


# ------------------------------------------------------------- reports


@dataclass
class ExperimentReport:
    config: dict
    results: dict
    reference: dict
    distances: dict
    tolerances: dict
    checks: dict
    notes: list
    timing: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) if self.checks else True

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "config": self.config,
            "results": self.results,
            "reference": self.reference,
            "distances": self.distances,
            "tolerances": self.tolerances,
            "checks": self.checks,
            "passed": self.passed,
            "notes": self.notes,
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True)

    def to_csv(self) -> str:
        rows = self.results.get("rows", [])
        if not rows:
            return ""
        header = list(rows[0].keys())
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(str(row[h]) for h in header))
        return "\n".join(lines) + "\n"


def _tv_vs_poisson(hist: dict[int, float], lam: float) -> float:
    """TV between an empirical law on {0,1,...} and Pois(lam), tail exact."""
    jmax = max(hist) if hist else 0
    tv = 0.0
    tail = 1.0
    for j in range(jmax + 1):
        pj = poisson_pmf(lam, j)
        tail -= pj
        tv += abs(hist.get(j, 0.0) - pj)
    return 0.5 * (tv + max(tail, 0.0))


def _hist_to_probs(hist: np.ndarray, total: int) -> dict[int, float]:
    return {j: int(c) / total for j, c in enumerate(hist.tolist()) if c}


def _hist_counts(hist: np.ndarray) -> dict[int, int]:
    return {j: int(c) for j, c in enumerate(hist.tolist()) if c}


def _se(p: float, total: int) -> float:
    return math.sqrt(max(p * (1 - p), 1e-12) / total)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    cost = estimate_cost(cfg)
    if cfg.enforce_cost_cap and cost > DEFAULT_COST_CAP:
        raise CostCapExceededError(
            f"estimated cost {cost:.2e} exceeds cap {DEFAULT_COST_CAP:.0e}; "
            "pass enforce_cost_cap=False (CLI: --unsafe-no-cap) to override"
        )
    chunk = cfg.chunk_size or _default_chunk(cfg.kind, cfg.n)
    ranges = [
        (s, min(s + chunk, cfg.replicas)) for s in range(0, cfg.replicas, chunk)
    ]
    t0 = time.perf_counter()
    if cfg.workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(
                pool.map(
                    _pool_entry,
                    [
                        (cfg.kind, cfg.seed, cfg.n, cfg.params, s, e)
                        for s, e in ranges
                    ],
                )
            )
    else:
        parts = [
            _run_chunk(cfg.kind, cfg.seed, cfg.n, cfg.params, s, e) for s, e in ranges
        ]
    totals = _merge(parts)
    elapsed = time.perf_counter() - t0
    report = _ASSEMBLERS[cfg.kind](cfg, totals)
    report.timing = {
        "seconds": elapsed,
        "throughput_replicas_per_s": cfg.replicas / elapsed if elapsed > 0 else 0.0,
        "estimated_cost": cost,
    }
    return report


def _pool_entry(args):
    return _run_chunk(*args)


def _default_chunk(kind: str, n: int) -> int:
    if kind == "extremal_scaling":
        return max(1, 20_000_000 // max(1, n * n))
    if kind == "evolution_switching":
        return max(1, 2_000_000 // max(1, n * n)) * 16
    return max(1, min(4096, 4_000_000 // max(1, n)))


# --- per-kind assembly ---


def _assemble_degree_cdf(cfg: ExperimentConfig, totals) -> ExperimentReport:
    n, total = cfg.n, cfg.replicas
    hist = totals["deg_hist"]
    cdf = np.cumsum(hist) / total
    b_grid = list(cfg.params.get("b_grid", DEFAULT_B_GRID))
    rows = []
    max_dev = 0.0
    for b in b_grid:
        thresh = int(math.floor(b * n))
        emp = float(cdf[min(thresh, n - 1)])
        ref = degree_cdf_limit(b)
        dev = abs(emp - ref)
        max_dev = max(max_dev, dev)
        rows.append(
            {"b": b, "empirical": emp, "reference": ref, "abs_diff": dev}
        )
    tol = cfg.params.get("tolerance", 3 * _se(0.5, total) + 0.01)
    return ExperimentReport(
        config=cfg.echo(),
        results={"rows": rows, "replicas": total},
        reference={"law": "P(deg(c1) <= b n) -> 1 - sqrt(1 - 2b)"},
        distances={"max_abs_diff": max_dev},
        tolerances={"max_abs_diff": tol, "basis": "3 sigma binomial + model slack"},
        checks={"max_abs_diff_within": max_dev <= tol},
        notes=[],
        timing={},
    )


def _assemble_length_law(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    j = cfg.params.get("j", 3) if cfg.kind == "length_class" else 0
    hist = totals["lmat_hists"][j]
    probs = _hist_to_probs(hist, total)
    tv = _tv_vs_poisson(probs, 1.0)
    try:
        gof = chi_square_gof(
            _hist_counts(hist), _poisson_model(1.0, int(hist.shape[0]) + 10)
        )
        chi2_fields = {
            "chi2": gof.statistic,
            "chi2_df": gof.df,
            "chi2_critical_001": gof.critical_001,
        }
    except Exception:  # too few samples for a meaningful partition
        chi2_fields = {"chi2": None, "chi2_df": None, "chi2_critical_001": None}
    tol = cfg.params.get("tolerance", 3 * math.sqrt(2.0 / total) + 0.01)
    rows = [
        {
            "value": v,
            "empirical": probs.get(v, 0.0),
            "reference": poisson_pmf(1.0, v),
        }
        for v in sorted(probs)
    ]
    return ExperimentReport(
        config=cfg.echo(),
        results={"rows": rows, "replicas": total, "mean": _hist_mean(hist, total)},
        reference={"law": f"L_{j} -> Pois(1)"},
        distances={"tv": tv, **chi2_fields},
        tolerances={"tv": tol, "basis": "3 sigma multinomial + model slack"},
        checks={"tv_within": tv <= tol},
        notes=[],
        timing={},
    )


def _poisson_model(lam: float, jmax: int) -> dict[int, float]:
    return {j: poisson_pmf(lam, j) for j in range(jmax + 1)}


def _hist_mean(hist: np.ndarray, total: int) -> float:
    return float(np.dot(hist, np.arange(hist.shape[0]))) / total


def _assemble_joint(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    k = cfg.params.get("k", 2)
    trunc = cfg.params.get("truncate", 5)
    joint = totals["joint"]
    # truncated TV: cells with all coordinates <= trunc, remainder aggregated
    emp_trunc: dict[tuple, float] = {}
    emp_rest = 0.0
    for key, c in joint.items():
        if all(v <= trunc for v in key):
            emp_trunc[key] = emp_trunc.get(key, 0.0) + c / total
        else:
            emp_rest += c / total
    ref_rest = 1.0
    tv = 0.0
    for key in _tuple_grid(k + 1, trunc):
        ref = 1.0
        for v in key:
            ref *= poisson_pmf(1.0, v)
        ref_rest -= ref
        tv += abs(emp_trunc.get(key, 0.0) - ref)
    tv = 0.5 * (tv + abs(emp_rest - max(ref_rest, 0.0)))
    sums = totals["sums"]
    cross = totals["cross"]
    corrs = {}
    max_corr = 0.0
    for i in range(k + 1):
        for j2 in range(i + 1, k + 1):
            num = cross[i, j2] / total - (sums[i] / total) * (sums[j2] / total)
            vi = cross[i, i] / total - (sums[i] / total) ** 2
            vj = cross[j2, j2] / total - (sums[j2] / total) ** 2
            corr = float(num / math.sqrt(vi * vj)) if vi > 0 and vj > 0 else 0.0
            corrs[f"L{i},L{j2}"] = corr
            max_corr = max(max_corr, abs(corr))
    tv_tol = cfg.params.get("tv_tolerance", 3 * math.sqrt(4.0 / total) + 0.015)
    corr_tol = cfg.params.get("corr_tolerance", 4 / math.sqrt(total) + 0.005)
    rows = [
        {"stat": f"corr({k2})", "value": v} for k2, v in sorted(corrs.items())
    ]
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": rows,
            "replicas": total,
            "joint_support": len(joint),
            "means": [float(s) / total for s in sums.tolist()],
        },
        reference={"law": f"(L_0..L_{k}) -> independent Pois(1)^{k + 1}"},
        distances={"truncated_tv": tv, "max_abs_corr": max_corr},
        tolerances={
            "truncated_tv": tv_tol,
            "max_abs_corr": corr_tol,
            "basis": "3-4 sigma + model slack",
        },
        checks={"tv_within": tv <= tv_tol, "corr_within": max_corr <= corr_tol},
        notes=[],
        timing={},
    )


def _tuple_grid(dims: int, trunc: int):
    if dims == 0:
        yield ()
        return
    for rest in _tuple_grid(dims - 1, trunc):
        for v in range(trunc + 1):
            yield (v,) + rest


def _assemble_monolithic(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    frac = totals["non_mono"] / total
    tol = cfg.params.get("tolerance", 6 / cfg.n + 3 * _se(min(0.5, 2 / cfg.n), total))
    notes = []
    if cfg.n <= 2:
        notes.append(
            "n <= 2: the adjacent-simple-chord ban wraps across the root chord; "
            "the modular condition is applied uniformly"
        )
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": [{"stat": "non_monolithic_fraction", "value": frac}],
            "non_monolithic": totals["non_mono"],
            "replicas": total,
        },
        reference={"law": "P(not monolithic) = O(1/n)"},
        distances={"non_monolithic_fraction": frac},
        tolerances={"non_monolithic_fraction": tol, "basis": "O(1/n) constant + 3 sigma"},
        checks={"fraction_within": frac <= tol},
        notes=notes,
        timing={},
    )


def _assemble_kcore(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    k = cfg.params.get("k", 3)
    eps = cfg.params.get("eps", 0.2)
    hist = totals["removed_hist"]
    probs = _hist_to_probs(hist, total)
    tv = _tv_vs_poisson(probs, float(k))
    equal_frac = totals["equal"] / total
    within_frac = totals["within_eps"] / total
    tv_tol = cfg.params.get("tv_tolerance", 3 * math.sqrt(2.0 / total) + 0.02)
    rows = [
        {"value": v, "empirical": probs.get(v, 0.0), "reference": poisson_pmf(k, v)}
        for v in sorted(probs)
    ]
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": rows,
            "replicas": total,
            "core_equals_len_fraction": equal_frac,
            "mean_removed": _hist_mean(hist, total),
            "removed_over_k_within_eps_fraction": within_frac,
            "eps": eps,
        },
        reference={
            "law": f"n - R_{k} -> Pois({k}); k-core = Len>={k} whp; (n-R_k)/k -> 1"
        },
        distances={"tv": tv},
        tolerances={"tv": tv_tol, "basis": "3 sigma multinomial + model slack"},
        checks={"tv_within": tv <= tv_tol},
        notes=[],
        timing={},
    )


def _assemble_zk(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    k = cfg.params.get("k", 3)
    hist = totals["z_hist"]
    mean = _hist_mean(hist, total)
    ref_mean = float(mean_Zk(cfg.n, k))
    ref_fact2 = float(second_factorial_Zk(cfg.n, k))
    ref_var = ref_fact2 + ref_mean - ref_mean**2
    idx = np.arange(hist.shape[0])
    var = float(np.dot(hist, idx**2)) / total - mean**2
    eps_grid = cfg.params.get("eps_grid", (0.1, 0.2, 0.5))
    rows = []
    for eps in eps_grid:
        mask = np.abs(idx / k - 1.0) > eps
        p = float(hist[mask].sum()) / total
        rows.append({"eps": eps, "prob_outside": p})
    mean_tol = cfg.params.get("mean_tolerance", 4 * math.sqrt(max(ref_var, 1e-9) / total))
    return ExperimentReport(
        config=cfg.echo(),
        results={"rows": rows, "replicas": total, "mean": mean, "variance": var},
        reference={
            "law": f"Z_{k}/{k} -> 1 in probability",
            "mean": ref_mean,
            "variance": ref_var,
        },
        distances={"mean_abs_error": abs(mean - ref_mean)},
        tolerances={"mean_abs_error": mean_tol, "basis": "4 sigma of the exact variance"},
        checks={"mean_within": abs(mean - ref_mean) <= mean_tol},
        notes=[],
        timing={},
    )


def _assemble_scc(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    n = cfg.n
    hist = totals["trivial_hist"]
    probs = {v: c / total for v, c in hist.items()}
    mean = sum(v * c for v, c in hist.items()) / total
    tv = _tv_vs_poisson(probs, 3.0)
    exactly_one = totals["nontrivial_hist"].get(1, 0) / total
    giant_mean_frac = totals["giant_sum"] / (total * n)
    mean_tol = cfg.params.get("mean_tolerance", 0.3)
    tv_tol = cfg.params.get("tv_tolerance", 3 * math.sqrt(2.0 / total) + 0.04)
    one_tol = cfg.params.get("one_nontrivial_min", 0.95)
    giant_tol = cfg.params.get("giant_min", 1 - 10 / n)
    rows = [
        {"value": v, "empirical": probs[v], "reference": poisson_pmf(3.0, v)}
        for v in sorted(probs)
    ]
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": rows,
            "replicas": total,
            "mean_trivial": mean,
            "one_nontrivial_fraction": exactly_one,
            "mean_giant_fraction": giant_mean_frac,
        },
        reference={"law": "trivial strong components -> Pois(3); one giant whp"},
        distances={"tv": tv, "mean_abs_error": abs(mean - 3.0)},
        tolerances={
            "mean_abs_error": mean_tol,
            "tv": tv_tol,
            "one_nontrivial_min": one_tol,
            "giant_min": giant_tol,
            "basis": "3 sigma + asymptotic slack",
        },
        checks={
            "mean_within": abs(mean - 3.0) <= mean_tol,
            "tv_within": tv <= tv_tol,
            "one_nontrivial": exactly_one >= one_tol,
            "giant_fraction": giant_mean_frac >= giant_tol,
        },
        notes=[],
        timing={},
    )


def _assemble_len_strong(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    succ = totals["success"]
    rows = [
        {"k": k, "strongly_connected_fraction": succ[k] / total}
        for k in sorted(succ)
    ]
    return ExperimentReport(
        config=cfg.echo(),
        results={"rows": rows, "replicas": total},
        reference={"law": "Len>=k strongly connected whp for k >= 2 log n"},
        distances={},
        tolerances={},
        checks={},
        notes=[],
        timing={},
    )


def _assemble_balanced(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    m = cfg.params.get("m") or _default_balanced_m(cfg.n)
    frac = totals["found"] / total
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": [{"m": m, "balanced_clique_fraction": frac}],
            "replicas": total,
        },
        reference={"law": "balanced clique of size m exists whp"},
        distances={},
        tolerances={},
        checks={},
        notes=[],
        timing={},
    )


def _assemble_switching(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    n = cfg.n
    m0 = cfg.params.get("m0", 50)
    counts = totals["switch_counts"]
    mono_counts = totals["mono_counts"]
    envelope_coef = 3 * math.e
    rows = []
    worst_margin = None
    for m in range(1, n + 1):
        p = int(counts[m - 1]) / total
        rows.append(
            {
                "m": m,
                "switch_prob": p,
                "envelope_3e_over_m2": envelope_coef / m**2,
                "mono_prob": int(mono_counts[m - 1]) / total,
            }
        )
        if m >= cfg.params.get("envelope_from", 20):
            margin = 10 / m**2 - p
            worst_margin = margin if worst_margin is None else min(worst_margin, margin)
    all_mono = totals["all_mono"] / total
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": rows,
            "replicas": total,
            "all_monolithic_from_m0": all_mono,
            "m0": m0,
        },
        reference={"law": "E[switch at m] <= 3e/m^2; eventual joint monolithicity"},
        distances={"worst_margin_to_10_over_m2": worst_margin},
        tolerances={"all_monolithic_min": cfg.params.get("all_mono_min", 0.8)},
        checks={
            "switch_envelope": worst_margin is None or worst_margin >= 0,
            "all_monolithic": all_mono >= cfg.params.get("all_mono_min", 0.8),
        },
        notes=["process is run one step past n so that switching at n is defined"],
        timing={},
    )


def _assemble_model_eq(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    cont = totals["cont"]
    disc = totals["disc"]
    support = set(cont) | set(disc)
    tv = 0.5 * sum(
        abs(cont.get(k, 0) / total - disc.get(k, 0) / total) for k in support
    )
    tol = cfg.params.get("tolerance", 3 * math.sqrt(len(support) / (2 * total)) + 0.002)
    return ExperimentReport(
        config=cfg.echo(),
        results={
            "rows": [{"stat": "joint_tv", "value": tv}],
            "replicas_per_model": total,
            "joint_support": len(support),
        },
        reference={"law": "(tau(C'_1..C'_n)) =d (U_1..U_n)"},
        distances={"joint_tv": tv},
        tolerances={"joint_tv": tol, "basis": "3 sigma two-sample multinomial"},
        checks={"tv_within": tv <= tol},
        notes=["replica r uses stream 2r for the continuous run, 2r+1 for the discrete run"],
        timing={},
    )


def _assemble_extremal(cfg: ExperimentConfig, totals) -> ExperimentReport:
    total = cfg.replicas
    n = cfg.n
    omega = totals["omega"]
    alpha = totals["alpha"]
    nest = totals["nest"]
    with_alpha = bool(cfg.params.get("with_alpha", True))
    t_coef = cfg.params.get("t_coef", 5.0)
    scale = (2 * n) ** (1 / 6)
    omega_std = [(w - math.sqrt(2 * n)) / scale for w in omega]
    lo = math.sqrt(2 * n) - t_coef * n ** (1 / 6)
    hi = math.e * math.sqrt(2 * n)
    in_bounds = sum(1 for a in alpha if lo <= a <= hi) if with_alpha else None
    rows = [
        {
            "replica": i,
            "omega": omega[i],
            "alpha": alpha[i] if with_alpha else "",
            "alpha_nest": nest[i],
            "omega_standardized": omega_std[i],
        }
        for i in range(total)
    ]
    results = {
        "rows": rows,
        "replicas": total,
        "mean_omega": sum(omega) / total,
        "mean_alpha_nest": sum(nest) / total,
    }
    checks = {}
    if with_alpha:
        results["alpha_in_bounds_fraction"] = in_bounds / total
        results["alpha_bounds"] = [lo, hi]
        checks["alpha_bounds"] = in_bounds / total >= cfg.params.get(
            "bounds_min", 0.99
        )
    return ExperimentReport(
        config=cfg.echo(),
        results=results,
        reference={
            "law": "sqrt(2n) - t n^(1/6) <= alpha <= e sqrt(2n) whp; "
            "(omega - sqrt(2n)) / (2n)^(1/6) tends to a GOE-type limit"
        },
        distances={},
        tolerances={"alpha_bounds_min": cfg.params.get("bounds_min", 0.99)},
        checks=checks,
        notes=["standardized omega samples exported; no distributional fit"],
        timing={},
    )


_ASSEMBLERS = {
    "degree_cdf": _assemble_degree_cdf,
    "simple_chords": _assemble_length_law,
    "length_class": _assemble_length_law,
    "joint_lengths": _assemble_joint,
    "monolithic_fraction": _assemble_monolithic,
    "kcore_vs_len": _assemble_kcore,
    "zk_concentration": _assemble_zk,
    "scc_trivial": _assemble_scc,
    "len_strong_conn": _assemble_len_strong,
    "balanced_clique": _assemble_balanced,
    "evolution_switching": _assemble_switching,
    "model_equivalence": _assemble_model_eq,
    "extremal_scaling": _assemble_extremal,
}
