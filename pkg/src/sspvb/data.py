"""Hourly dataset I/O and a seeded synthetic weather/load generator.

CSV schemas (``hour`` is a 0-based hour index)::

    weather: hour,ghi_w_m2,temp_c
    load:    hour,load_kw
"""

from __future__ import annotations

import csv
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .model import AnnualDataset

WEATHER_COLUMNS = ("hour", "ghi_w_m2", "temp_c")
LOAD_COLUMNS = ("hour", "load_kw")

MAX_IRRADIANCE = 1100.0

# Defaults of the bundled synthetic year.
BUNDLED_SEED = 2019
BUNDLED_PEAK_LOAD_KW = 20.0
BUNDLED_LATITUDE_FACTOR = 0.1


class DatasetError(ValueError):
    """Malformed input file; the message names file, row and column."""


def _read_columns(path: Path, columns: tuple[str, ...], nonnegative: tuple[str, ...]) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"{path}: file not found")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        missing = [c for c in columns if c not in header]
        if missing:
            raise DatasetError(f"{path}: missing column(s) {', '.join(missing)}; header is {header}")
        pos = {c: header.index(c) for c in columns}
        values = {c: [] for c in columns}
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            line = reader.line_num
            for col in columns:
                try:
                    cell = row[pos[col]].strip()
                except IndexError:
                    raise DatasetError(f"{path}: row {row_no} (line {line}), column '{col}': missing value") from None
                try:
                    val = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"{path}: row {row_no} (line {line}), column '{col}': non-numeric value {cell!r}"
                    ) from None
                if not math.isfinite(val):
                    raise DatasetError(f"{path}: row {row_no} (line {line}), column '{col}': non-finite value {cell!r}")
                if col in nonnegative and val < 0:
                    raise DatasetError(f"{path}: row {row_no} (line {line}), column '{col}': negative value {val}")
                if col == "hour" and val != row_no - 1:
                    raise DatasetError(
                        f"{path}: row {row_no} (line {line}), column 'hour': expected {row_no - 1}, got {cell}"
                    )
                values[col].append(val)
    if not values[columns[0]]:
        raise DatasetError(f"{path}: no data rows")
    return {c: np.asarray(v, dtype=np.float64) for c, v in values.items()}


def ingest_dataset(weather_path, load_path) -> AnnualDataset:
    """Read and validate a weather CSV and a load CSV into an :class:`AnnualDataset`."""
    weather = _read_columns(Path(weather_path), WEATHER_COLUMNS, ("ghi_w_m2",))
    load = _read_columns(Path(load_path), LOAD_COLUMNS, ("load_kw",))
    n_w, n_l = len(weather["hour"]), len(load["hour"])
    if n_w != n_l:
        raise DatasetError(f"length mismatch: {weather_path} has {n_w} rows, {load_path} has {n_l} rows")
    return AnnualDataset(weather["ghi_w_m2"], weather["temp_c"], load["load_kw"])


def write_dataset(dataset: AnnualDataset, weather_path, load_path, digits: int = 6) -> None:
    fmt = f"{{:.{digits}f}}"
    with open(weather_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WEATHER_COLUMNS)
        for t, (g, temp) in enumerate(zip(dataset.irradiance, dataset.ambient_temp)):
            w.writerow((t, fmt.format(g), fmt.format(temp)))
    with open(load_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOAD_COLUMNS)
        for t, p in enumerate(dataset.load):
            w.writerow((t, fmt.format(p)))


def load_bundled_year() -> AnnualDataset:
    """The synthetic reference year shipped with the package (8760 h)."""
    root = resources.files("sspvb") / "data"
    with resources.as_file(root / "weather.csv") as wp, resources.as_file(root / "load.csv") as lp:
        return ingest_dataset(wp, lp)


def _hour_of_day() -> np.ndarray:
    # hours are evaluated at their midpoint
    return np.arange(24) + 0.5


def load_shape() -> np.ndarray:
    """Normalized (peak = 1) daily load shape: base plus morning and evening peaks."""
    h = _hour_of_day()
    shape = 0.35 + 0.30 * np.exp(-(((h - 7.5) / 1.5) ** 2)) + 0.65 * np.exp(-(((h - 19.5) / 2.0) ** 2))
    return shape / shape.max()


def expected_mean_load(peak_load_kw: float) -> float:
    """Long-run mean of the synthetic load (the multiplicative noise has mean one)."""
    return float(peak_load_kw * load_shape().mean())


def generate_synthetic(seed: int = BUNDLED_SEED, days: int = 365, peak_load_kw: float = BUNDLED_PEAK_LOAD_KW,
                       latitude_factor: float = BUNDLED_LATITUDE_FACTOR) -> AnnualDataset:
    """Seeded synthetic hourly weather and load.

    Irradiance is a half-sine over each daylight window scaled by a seasonal
    factor and a daily clearness index. Clearness follows a bounded AR(1)
    process so that overcast spells span several days. ``latitude_factor`` in
    [0, 1] sets how strongly day length and irradiance vary with season (0 is
    equatorial). Temperature is a diurnal sinusoid, load a fixed daily shape
    scaled to ``peak_load_kw`` with bounded multiplicative noise.
    """
    if days < 1:
        raise ValueError("days must be >= 1")
    if peak_load_kw < 0:
        raise ValueError("peak_load_kw must be >= 0")
    rng = np.random.default_rng(seed)
    h = _hour_of_day()
    day = np.arange(days)
    season = np.sin(2.0 * np.pi * (day - 80) / 365.0)

    z = np.empty(days)
    state = 0.0
    shocks = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=days)
    for d in range(days):
        state = 0.7 * state + math.sqrt(1.0 - 0.49) * shocks[d]
        z[d] = state
    clearness = np.clip(0.72 + 0.22 * z, 0.15, 1.0)

    day_length = 12.0 + 4.0 * latitude_factor * season
    sunrise = 12.0 - day_length / 2.0
    peak_irr = 1000.0 * (1.0 + 0.25 * latitude_factor * season) * clearness
    phase = (h[None, :] - sunrise[:, None]) / day_length[:, None]
    daylight = (phase > 0.0) & (phase < 1.0)
    irr = np.where(daylight, peak_irr[:, None] * np.sin(np.pi * np.clip(phase, 0.0, 1.0)), 0.0)
    irr = irr * rng.uniform(0.9, 1.1, size=irr.shape)
    irr = np.where(daylight, np.clip(irr, 0.0, MAX_IRRADIANCE), 0.0)

    temp = (
        27.0
        + 3.0 * latitude_factor * season[:, None]
        + 4.0 * np.sin(2.0 * np.pi * (h[None, :] - 9.0) / 24.0)
        + rng.uniform(-0.5, 0.5, size=(days, 24))
    )

    load = peak_load_kw * load_shape()[None, :] * rng.uniform(0.85, 1.15, size=(days, 24))
    return AnnualDataset(irr.ravel(), temp.ravel(), load.ravel())
