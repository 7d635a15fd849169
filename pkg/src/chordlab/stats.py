"""Distribution distances and goodness-of-fit plumbing for the harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotNormalizedError, TooFewSamplesError

_NORMALIZATION_TOL = 1e-9


def tv_distance(p: Mapping, q: Mapping) -> float:
    """Total variation distance 0.5 * sum |p - q| over the union support."""
    for name, dist in (("p", p), ("q", q)):
        total = float(sum(dist.values()))
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise NotNormalizedError(f"{name} sums to {total}, not 1")
    support = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(v, 0.0)) - float(q.get(v, 0.0))) for v in support)


def counts_to_probs(counts: Mapping, total: int | None = None) -> dict:
    tot = sum(counts.values()) if total is None else total
    return {v: c / tot for v, c in counts.items()}


# Upper critical values of the chi-square distribution for df = 1..100.
# Stored (not computed at runtime) so pass/fail thresholds are frozen data.
_CHI2_CRITICAL_001 = (
    6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894,
    18.475307, 20.090235, 21.665994, 23.209251, 24.724970, 26.216967,
    27.688250, 29.141238, 30.577914, 31.999927, 33.408664, 34.805306,
    36.190869, 37.566235, 38.932173, 40.289360, 41.638398, 42.979820,
    44.314105, 45.641683, 46.962942, 48.278236, 49.587884, 50.892181,
    52.191395, 53.485772, 54.775540, 56.060909, 57.342073, 58.619215,
    59.892500, 61.162087, 62.428121, 63.690740, 64.950071, 66.206236,
    67.459348, 68.709513, 69.956832, 71.201400, 72.443307, 73.682639,
    74.919474, 76.153891, 77.385962, 78.615756, 79.843338, 81.068772,
    82.292117, 83.513430, 84.732766, 85.950176, 87.165711, 88.379419,
    89.591344, 90.801532, 92.010024, 93.216860, 94.422079, 95.625719,
    96.827816, 98.028403, 99.227515, 100.425184, 101.621441, 102.816314,
    104.009834, 105.202028, 106.392923, 107.582545, 108.770919, 109.958069,
    111.144019, 112.328793, 113.512410, 114.694895, 115.876266, 117.056544,
    118.235749, 119.413900, 120.591015, 121.767111, 122.942207, 124.116319,
    125.289463, 126.461656, 127.632913, 128.803249, 129.972679, 131.141217,
    132.308877, 133.475672, 134.641617, 135.806723,
)

_CHI2_CRITICAL_0001 = (
    10.827566, 13.815511, 16.266236, 18.466827, 20.515006, 22.457744,
    24.321886, 26.124482, 27.877165, 29.588298, 31.264134, 32.909490,
    34.528179, 36.123274, 37.697298, 39.252355, 40.790217, 42.312396,
    43.820196, 45.314747, 46.797038, 48.267942, 49.728232, 51.178598,
    52.619656, 54.051962, 55.476020, 56.892285, 58.301173, 59.703064,
    61.098306, 62.487219, 63.870099, 65.247217, 66.618829, 67.985168,
    69.346452, 70.702887, 72.054663, 73.401958, 74.744938, 76.083763,
    77.418578, 78.749524, 80.076732, 81.400326, 82.720423, 84.037134,
    85.350565, 86.660815, 87.967980, 89.272151, 90.573412, 91.871847,
    93.167533, 94.460545, 95.750954, 97.038829, 98.324234, 99.607233,
    100.887885, 102.166248, 103.442377, 104.716325, 105.988143, 107.257880,
    108.525582, 109.791296, 111.055066, 112.316932, 113.576936, 114.835117,
    116.091513, 117.346161, 118.599095, 119.850350, 121.099959, 122.347954,
    123.594366, 124.839224, 126.082558, 127.324397, 128.564766, 129.803693,
    131.041204, 132.277323, 133.512074, 134.745481, 135.977567, 137.208354,
    138.437864, 139.666117, 140.893134, 142.118935, 143.343540, 144.566966,
    145.789233, 147.010358, 148.230359, 149.449253,
)

CHI2_CRITICAL = {0.01: _CHI2_CRITICAL_001, 0.001: _CHI2_CRITICAL_0001}
CHI2_MAX_DF = 100


def chi2_critical(df: int, level: float) -> float:
    if level not in CHI2_CRITICAL:
        raise ValueError(f"no stored critical values for level {level}")
    if not 1 <= df <= CHI2_MAX_DF:
        raise ValueError(f"df={df} outside stored range [1, {CHI2_MAX_DF}]")
    return CHI2_CRITICAL[level][df - 1]


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    cells: tuple
    critical_01: float | None
    critical_001: float | None

    def passed(self, level: float = 0.001) -> bool:
        crit = chi2_critical(self.df, level) if self.df <= CHI2_MAX_DF else None
        if crit is None:
            raise ValueError(f"df={self.df} beyond the stored table")
        return self.statistic <= crit


def chi_square_gof(
    counts: Mapping, model_probs: Mapping, min_cell: float = 5.0
) -> ChiSquareResult:
    """Pearson statistic of observed counts against model probabilities.

    Support cells whose expected count falls below min_cell are merged into
    a single tail cell; df = cells - 1.
    """
    total = sum(counts.values())
    if total <= 0:
        raise TooFewSamplesError("no observations")
    kept = []
    tail_obs = 0
    tail_exp = 0.0
    seen_p = 0.0
    support = sorted(set(counts) | set(model_probs))
    for v in support:
        pv = float(model_probs.get(v, 0.0))
        seen_p += pv
        exp = pv * total
        obs = counts.get(v, 0)
        if exp < min_cell:
            tail_obs += obs
            tail_exp += exp
        else:
            kept.append((v, obs, exp))
    # probability mass the model puts outside the listed support joins the tail
    tail_exp += max(0.0, 1.0 - seen_p) * total
    cells = list(kept)
    if tail_exp > 0 or tail_obs > 0:
        cells.append(("tail", tail_obs, tail_exp))
    if len(cells) < 2:
        raise TooFewSamplesError("fewer than two cells after merging")
    stat = 0.0
    for _v, obs, exp in cells:
        if exp <= 0:
            raise NotNormalizedError("model puts zero mass on an observed cell")
        stat += (obs - exp) ** 2 / exp
    df = len(cells) - 1
    crit01 = chi2_critical(df, 0.01) if df <= CHI2_MAX_DF else None
    crit001 = chi2_critical(df, 0.001) if df <= CHI2_MAX_DF else None
    return ChiSquareResult(
        statistic=stat,
        df=df,
        cells=tuple(cells),
        critical_01=crit01,
        critical_001=crit001,
    )
