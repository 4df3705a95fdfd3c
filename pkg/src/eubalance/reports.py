"""Report tables, fit summaries, stability summaries, and plot data.

Every number is printed with six significant digits (half-up rounding away
from zero, trailing zeros stripped, scientific notation outside the
1e-4..1e6 magnitude window). Builders return (header, rows) tables of
strings; rendering to comma-separated or aligned text is separate so the
two emitted forms of a report always agree cell for cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Sequence

from . import accounting, expfit, stability
from .accounting import RegionDefinition
from .dataset import BASE_YEAR, Dataset

COUNTRY_NAMES = {
    "AT": "Austria", "BE": "Belgium", "BG": "Bulgaria", "CY": "Cyprus",
    "CZ": "Czech Republic", "DK": "Denmark", "EE": "Estonia",
    "FI": "Finland", "FR": "France", "DE": "Germany", "EL": "Greece",
    "HU": "Hungary", "IE": "Ireland", "IT": "Italy", "LV": "Latvia",
    "LT": "Lithuania", "LU": "Luxembourg", "MT": "Malta",
    "NL": "Netherlands", "PL": "Poland", "PT": "Portugal", "RO": "Romania",
    "SK": "Slovakia", "SI": "Slovenia", "ES": "Spain", "SE": "Sweden",
    "UK": "United Kingdom",
}

FIT_SERIES = {
    "eu9plus": "EU9+",
    "eu18minus": "EU18-",
    "euro7plus": "Eurozone7+",
    "euro10minus": "Eurozone10-",
}

STABILITY_SCOPES = {
    "eu": ("eu9plus", "eu18minus"),
    "eurozone": ("euro7plus", "euro10minus"),
}

PREDICT_THROUGH_T = 20
PLOT_T_MAX = 25.0
PLOT_STEPS_PER_YEAR = 20  # grid step 0.05


def sig6(x: float) -> str:
    """Render x with 6 significant digits, half rounded away from zero."""
    if x == 0:
        return "0."
    d = Decimal(repr(float(x)))
    _, digits, exp = d.as_tuple()
    e = len(digits) + exp - 1
    r = d.quantize(Decimal(1).scaleb(e - 5), rounding=ROUND_HALF_UP)
    if r == 0:
        return "0."
    _, dig2, exp2 = r.as_tuple()
    e2 = len(dig2) + exp2 - 1
    if e2 != e:
        # rounding bumped the magnitude, e.g. 999.9999 -> 1000.00
        r = d.quantize(Decimal(1).scaleb(e2 - 5), rounding=ROUND_HALF_UP)
        e = e2
    if e >= 6 or e <= -5:
        return (format(r.normalize(), "e")
                .replace("e+", "e").replace("e0", "e").replace("e-0", "e-"))
    s = format(r, "f")
    s = s.rstrip("0") if "." in s else s + "."
    if s.startswith("."):
        s = "0" + s
    elif s.startswith("-."):
        s = "-0" + s[1:]
    return s


@dataclass(frozen=True)
class Table:
    title: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


def to_csv(table: Table) -> str:
    lines = [",".join(table.header)]
    lines.extend(",".join(row) for row in table.rows)
    return "\n".join(lines) + "\n"


def to_text(table: Table) -> str:
    widths = [len(h) for h in table.header]
    for row in table.rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: Sequence[str]) -> str:
        parts = [cells[0].ljust(widths[0])]
        parts += [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join(parts).rstrip()

    out = [table.title, line(table.header),
           "  ".join("-" * w for w in widths)]
    out.extend(line(row) for row in table.rows)
    return "\n".join(out) + "\n"


def _region(regions: dict[str, RegionDefinition], name: str) -> RegionDefinition:
    if name == "Germany":
        return RegionDefinition("Germany", frozenset({"DE"}))
    try:
        return regions[name]
    except KeyError:
        raise ValueError(f"region {name!r} is not defined") from None


def _annual_map(dataset: Dataset, region: RegionDefinition,
                kind: str) -> dict[int, float]:
    series = accounting.region_series(dataset, region, kind, "annual")
    return {BASE_YEAR + t: v for t, v in series.points}


def _years(dataset: Dataset) -> list[int]:
    return list(dataset.years)


# ---------------------------------------------------------------------------
# Tables 1-12.

def country_totals_table(dataset: Dataset) -> Table:
    rows_by_code = {row.subject: row
                    for row in accounting.totals_table(dataset,
                                                       dataset.countries)}
    ordered = sorted(rows_by_code, key=lambda c: COUNTRY_NAMES.get(c, c))
    rows = []
    for code in ordered:
        r = rows_by_code[code]
        rows.append((COUNTRY_NAMES.get(code, code),
                     sig6(r.cab_total), str(r.rank_cab),
                     sig6(r.ggb_total), str(r.rank_ggb),
                     sig6(r.psb_total), str(r.rank_psb)))
    cab = math.fsum(rows_by_code[c].cab_total for c in rows_by_code)
    ggb = math.fsum(rows_by_code[c].ggb_total for c in rows_by_code)
    psb = math.fsum(rows_by_code[c].psb_total for c in rows_by_code)
    rows.append(("EU27", sig6(cab), "", sig6(ggb), "", sig6(psb), ""))
    return Table("Country balance totals with ranks",
                 ("country", "cab_total", "rank", "ggb_total", "rank",
                  "psb_total", "rank"),
                 tuple(rows))


_PAIR_TABLES = {
    2: ("EU totals in complementary pairs",
        ("Eurozone", "EU10", "EU9+", "EU18-", "Germany", "EU26", "EU27")),
    3: ("Eurozone totals in complementary pairs",
        ("Eurozone7+", "Eurozone10-", "Germany", "Eurozone16", "Eurozone")),
    4: ("Block totals assembling EU27",
        ("Germany", "Eurozone6+", "Eurozone10-", "EU10", "EU27")),
}


def pair_totals_table(dataset: Dataset, regions: dict[str, RegionDefinition],
                      table_id: int) -> Table:
    title, names = _PAIR_TABLES[table_id]
    rows = []
    for name in names:
        region = _region(regions, name)
        cab = accounting.region_total(dataset, region, "CAB")
        ggb = accounting.region_total(dataset, region, "GGB")
        psb = accounting.region_total(dataset, region, "PSB")
        rows.append((name, sig6(cab), sig6(ggb), sig6(psb)))
    return Table(title, ("region", "cab_total", "ggb_total", "psb_total"),
                 tuple(rows))


_TABLE5_CODES = ("DE", "FR", "UK", "IT", "ES", "NL")


def pinned_share_table(dataset: Dataset) -> Table:
    rows = []
    for year in _years(dataset):
        shares = [accounting.gdp_share(dataset, code, year)
                  for code in _TABLE5_CODES]
        rows.append((str(year), *[sig6(s) for s in shares],
                     sig6(math.fsum(shares))))
    header = ("year", *[COUNTRY_NAMES[c] for c in _TABLE5_CODES], "Total")
    return Table("GDP shares of the six largest economies", header,
                 tuple(rows))


_TABLE6_REGIONS = ("EU9+", "EU18-", "Germany", "EU26", "Eurozone6+",
                   "Eurozone10-", "Eurozone", "EU10", "EU27")


def region_gdp_table(dataset: Dataset,
                     regions: dict[str, RegionDefinition]) -> Table:
    maps = {name: _annual_map(dataset, _region(regions, name), "GDP")
            for name in _TABLE6_REGIONS}
    rows = [(str(year), *[sig6(maps[name][year]) for name in _TABLE6_REGIONS])
            for year in _years(dataset)]
    return Table("Region GDP by year", ("year", *_TABLE6_REGIONS),
                 tuple(rows))


def region_share_table(dataset: Dataset,
                       regions: dict[str, RegionDefinition]) -> Table:
    names = _TABLE6_REGIONS[:-1]
    rows = []
    for year in _years(dataset):
        shares = [accounting.gdp_share(dataset, _region(regions, name), year)
                  for name in names]
        rows.append((str(year), *[sig6(s) for s in shares]))
    return Table("Region shares of total GDP", ("year", *names), tuple(rows))


_TABLE8_REGIONS = ("Germany", "Eurozone6+", "Eurozone10-", "EU10", "EU27")


def block_cab_table(dataset: Dataset,
                    regions: dict[str, RegionDefinition]) -> Table:
    maps = {name: _annual_map(dataset, _region(regions, name), "CAB")
            for name in _TABLE8_REGIONS}
    rows = [(str(year), *[sig6(maps[name][year]) for name in _TABLE8_REGIONS])
            for year in _years(dataset)]
    return Table("Annual current-account balances by block",
                 ("year", *_TABLE8_REGIONS), tuple(rows))


def block_cab_ratio_table(dataset: Dataset,
                          regions: dict[str, RegionDefinition]) -> Table:
    cab = {name: _annual_map(dataset, _region(regions, name), "CAB")
           for name in _TABLE8_REGIONS}
    gdp = {name: _annual_map(dataset, _region(regions, name), "GDP")
           for name in _TABLE8_REGIONS}
    rows = [(str(year),
             *[sig6(cab[name][year] / gdp[name][year])
               for name in _TABLE8_REGIONS])
            for year in _years(dataset)]
    return Table("Annual current-account balances as GDP fractions",
                 ("year", *_TABLE8_REGIONS), tuple(rows))


_RATIO_PAIR_TABLES = {
    10: ("EU surplus and deficit groups, balances and GDP fractions",
         ("EU9+", "EU18-", "EU27")),
    11: ("Germany and the rest of the EU, balances and GDP fractions",
         ("Germany", "EU26", "EU27")),
    12: ("Eurozone surplus and deficit groups, balances and GDP fractions",
         ("Eurozone7+", "Eurozone10-", "Eurozone")),
}


def pair_cab_ratio_table(dataset: Dataset,
                         regions: dict[str, RegionDefinition],
                         table_id: int) -> Table:
    title, names = _RATIO_PAIR_TABLES[table_id]
    cab = {name: _annual_map(dataset, _region(regions, name), "CAB")
           for name in names}
    gdp = {name: _annual_map(dataset, _region(regions, name), "GDP")
           for name in names}
    rows = []
    for year in _years(dataset):
        cells = []
        for name in names:
            cells.append(sig6(cab[name][year]))
            cells.append(sig6(cab[name][year] / gdp[name][year]))
        rows.append((str(year), *cells))
    header = ["year"]
    for name in names:
        header.append(f"{name} CAB")
        header.append(f"{name} CAB/GDP")
    return Table(title, tuple(header), tuple(rows))


def build_table(dataset: Dataset, regions: dict[str, RegionDefinition],
                table_id: int) -> Table:
    if table_id == 1:
        return country_totals_table(dataset)
    if table_id in _PAIR_TABLES:
        return pair_totals_table(dataset, regions, table_id)
    if table_id == 5:
        return pinned_share_table(dataset)
    if table_id == 6:
        return region_gdp_table(dataset, regions)
    if table_id == 7:
        return region_share_table(dataset, regions)
    if table_id == 8:
        return block_cab_table(dataset, regions)
    if table_id == 9:
        return block_cab_ratio_table(dataset, regions)
    if table_id in _RATIO_PAIR_TABLES:
        return pair_cab_ratio_table(dataset, regions, table_id)
    raise ValueError(f"no table {table_id}; choose 1-12")


# ---------------------------------------------------------------------------
# Fits.

def fit_series_points(dataset: Dataset, regions: dict[str, RegionDefinition],
                      series_key: str) -> list[tuple[int, float]]:
    """Cumulative current-account points (t, value) for one fitted series."""
    try:
        region_name = FIT_SERIES[series_key]
    except KeyError:
        raise ValueError(f"unknown series {series_key!r}") from None
    region = _region(regions, region_name)
    series = accounting.region_series(dataset, region, "CAB", "cumulative")
    return list(series.points)


def fit_summary_table(series_key: str, model: expfit.ExpFitModel,
                      level: float = 0.95) -> Table:
    (alo, ahi), (blo, bhi) = expfit.param_confidence_interval(model, level)
    an = model.anova
    rows = (
        ("series", FIT_SERIES.get(series_key, series_key)),
        ("model", "alpha*exp(beta*t)"),
        ("n", str(model.n)),
        ("alpha", sig6(model.alpha)),
        ("alpha_se", sig6(model.se_alpha)),
        ("alpha_ci_low", sig6(alo)),
        ("alpha_ci_high", sig6(ahi)),
        ("beta", sig6(model.beta)),
        ("beta_se", sig6(model.se_beta)),
        ("beta_ci_low", sig6(blo)),
        ("beta_ci_high", sig6(bhi)),
        ("ci_level", sig6(level)),
        ("ss_model", sig6(an.ss_model)),
        ("df_model", str(an.df_model)),
        ("ss_error", sig6(an.ss_error)),
        ("df_error", str(an.df_error)),
        ("ms_error", sig6(model.mse)),
        ("ss_uncorrected_total", sig6(an.ss_uncorrected_total)),
        ("df_uncorrected_total", str(an.df_uncorrected)),
        ("ss_corrected_total", sig6(an.ss_corrected_total)),
        ("df_corrected_total", str(an.df_corrected)),
        ("r_squared", sig6(expfit.r_squared(model))),
    )
    return Table(f"Exponential fit summary: {FIT_SERIES.get(series_key, series_key)}",
                 ("quantity", "value"), rows)


def prediction_table(series_key: str, model: expfit.ExpFitModel,
                     points: Sequence[tuple[int, float]],
                     level: float = 0.95) -> Table:
    observed = dict(points)
    rows = []
    for t in range(PREDICT_THROUGH_T + 1):
        row = expfit.predict(model, float(t), level=level,
                             observed=observed.get(t))
        rows.append((str(BASE_YEAR + t), str(t),
                     "-" if row.observed is None else sig6(row.observed),
                     sig6(row.predicted), sig6(row.se_single),
                     sig6(row.ci_low), sig6(row.ci_high)))
    return Table(f"Predictions: {FIT_SERIES.get(series_key, series_key)}",
                 ("year", "t", "observed", "predicted", "se", "ci_low",
                  "ci_high"),
                 tuple(rows))


# ---------------------------------------------------------------------------
# Stability.

def _year_of(t: float) -> int:
    return round(BASE_YEAR + t)


def stability_table(scope: str, analysis: stability.GapAnalysis,
                    interval: stability.UncertaintyInterval,
                    latest_t: int) -> Table:
    tp = stability.turning_points(analysis)
    rows = (
        ("scope", scope),
        ("surplus_coefficient_a", sig6(analysis.a)),
        ("surplus_rate_b", sig6(analysis.b)),
        ("deficit_coefficient_c", sig6(analysis.c)),
        ("deficit_rate_d", sig6(analysis.d)),
        ("t2_inflection", sig6(tp.t2)),
        ("t2_year", str(_year_of(tp.t2))),
        ("t1_maximum", sig6(tp.t1)),
        ("t1_year", str(_year_of(tp.t1))),
        ("t0_turning_point", sig6(tp.t0)),
        ("t0_year", str(_year_of(tp.t0))),
        ("level_at_t0", sig6(tp.level)),
        ("t_m", sig6(interval.t_m)),
        ("t_m_year", str(_year_of(interval.t_m))),
        ("t_M", sig6(interval.t_M)),
        ("t_M_year", str(_year_of(interval.t_M))),
        ("band_level", sig6(interval.band_level)),
        ("joint_level", sig6(interval.joint_level)),
        ("phase_at_latest_year",
         stability.phase_label(analysis, float(latest_t))),
        ("latest_year", str(BASE_YEAR + latest_t)),
    )
    return Table(f"Gap stability analysis: {scope}", ("quantity", "value"),
                 rows)


def plot_data_table(scope: str, analysis: stability.GapAnalysis,
                    band_level: float) -> Table:
    s_model = analysis.surplus_model
    d_model = analysis.deficit_model
    rows = []
    steps = int(PLOT_T_MAX * PLOT_STEPS_PER_YEAR)
    for k in range(steps + 1):
        t = k / PLOT_STEPS_PER_YEAR
        surplus = s_model.alpha * math.exp(s_model.beta * t)
        deficit = d_model.alpha * math.exp(d_model.beta * t)
        gap = surplus + deficit  # deficit is negative
        s_lo, s_hi = stability.band_envelope(s_model, t, band_level)
        d_lo, d_hi = stability.band_envelope(d_model, t, band_level)
        rows.append((sig6(t), sig6(surplus), sig6(-surplus),
                     sig6(deficit), sig6(-deficit), sig6(gap),
                     sig6(s_lo), sig6(s_hi), sig6(-d_hi), sig6(-d_lo)))
    return Table(f"Plot data: {scope}",
                 ("t", "surplus", "surplus_neg", "deficit", "deficit_mag",
                  "gap", "surplus_band_low", "surplus_band_high",
                  "deficit_mag_band_low", "deficit_mag_band_high"),
                 tuple(rows))
