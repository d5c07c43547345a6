#!/usr/bin/env python3
"""Regenerates the bundled benchmark fixtures.

The original public datasets (Wikipedia page views for the Peyton Manning
page, Capital Bikeshare daily ride counts) cannot be fetched or redistributed
from this build environment, so the repository ships deterministic synthetic
surrogates whose scale, span, seasonal structure, autocorrelation, and
missing-data pattern are matched to the published characteristics of the
originals. See data/README.md for details. Running this script reproduces the
committed CSVs byte for byte.
"""

import datetime as dt
import math

import numpy as np


def write_csv(path, start, values, missing_idx):
    missing = set(missing_idx.tolist())
    lines = ["ts,y"]
    for i, v in enumerate(values):
        day = start + dt.timedelta(days=i)
        if i in missing:
            lines.append(f"{day.isoformat()},")
        else:
            lines.append(f"{day.isoformat()},{v}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def doy_frac(start, n):
    out = np.empty(n)
    for i in range(n):
        day = start + dt.timedelta(days=i)
        year_len = 366 if (day.year % 4 == 0 and (day.year % 100 != 0 or day.year % 400 == 0)) else 365
        out[i] = (day.timetuple().tm_yday - 1) / year_len
    return out


def dow(start, n):
    return np.array([(start + dt.timedelta(days=i)).weekday() for i in range(n)])


def ar1(rng, n, phi, sigma):
    eps = rng.normal(0.0, sigma, n)
    out = np.empty(n)
    out[0] = eps[0] / math.sqrt(1 - phi * phi)
    for i in range(1, n):
        out[i] = phi * out[i - 1] + eps[i]
    return out


def make_peyton(path):
    # Daily log page views, ~9 years, strong in-season (Sep-Jan) yearly shape,
    # weekly pattern, career-arc trend, occasional news spikes, a few holes.
    rng = np.random.default_rng(20150614)
    start = dt.date(2007, 1, 1)
    end = dt.date(2015, 12, 31)
    n = (end - start).days + 1

    t = np.arange(n)
    yearly_pos = doy_frac(start, n)
    weekday = dow(start, n)

    # Piecewise-linear career trend in log space.
    base = 7.6
    knots = [(0.0, 0.00065), (0.33, -0.00005), (0.62, 0.00085), (0.80, -0.00090)]
    trend = np.full(n, base)
    slope_acc = np.zeros(n)
    prev_slope = 0.0
    for frac, slope in knots:
        k = frac * (n - 1)
        slope_acc += (slope - prev_slope) * np.maximum(t - k, 0.0)
        prev_slope = slope
    trend += slope_acc

    # Football season: high from September through the January playoffs.
    yearly = (
        0.55 * np.cos(2 * math.pi * (yearly_pos - 0.055))
        + 0.21 * np.cos(4 * math.pi * (yearly_pos - 0.02))
        + 0.07 * np.cos(6 * math.pi * yearly_pos)
    )

    weekly_shape = np.array([0.18, 0.10, 0.03, -0.02, -0.06, -0.14, 0.22])
    weekly = weekly_shape[weekday]

    noise = ar1(rng, n, 0.55, 0.24)

    # News spikes with short geometric decay.
    spikes = np.zeros(n)
    n_spikes = 70
    spike_days = rng.choice(n, size=n_spikes, replace=False)
    spike_sizes = rng.uniform(0.8, 3.2, n_spikes)
    in_season = (yearly_pos > 0.66) | (yearly_pos < 0.1)
    for day, size in zip(spike_days, spike_sizes):
        if not in_season[day]:
            size *= 0.45
        for lag in range(5):
            if day + lag < n:
                spikes[day + lag] += size * (0.38 ** lag)

    y = trend + yearly + weekly + noise + spikes
    y = np.round(y, 5)

    missing = rng.choice(n, size=28, replace=False)
    write_csv(path, start, y, missing)


def make_bike(path):
    # Daily ride counts, 8 years, multiplicative yearly cycle, commuter weekly
    # pattern, growth that levels off, weather shocks, holiday dips.
    rng = np.random.default_rng(20181231)
    start = dt.date(2011, 1, 1)
    end = dt.date(2018, 12, 31)
    n = (end - start).days + 1

    t = np.arange(n)
    yearly_pos = doy_frac(start, n)
    weekday = dow(start, n)

    # Log-space trend: fast growth, then saturation, mild late decline.
    log_base = 7.95
    knots = [(0.0, 0.00105), (0.30, 0.00047), (0.62, 0.00012), (0.85, -0.00028)]
    trend = np.full(n, log_base)
    prev = 0.0
    for frac, slope in knots:
        k = frac * (n - 1)
        trend += (slope - prev) * np.maximum(t - k, 0.0)
        prev = slope

    # Warm-season peak near early July.
    yearly = 0.48 * np.cos(2 * math.pi * (yearly_pos - 0.515)) + 0.10 * np.cos(
        4 * math.pi * (yearly_pos - 0.48)
    )

    weekly_shape = np.array([0.05, 0.07, 0.08, 0.07, 0.05, -0.04, -0.10])
    weekly = weekly_shape[weekday]

    noise = ar1(rng, n, 0.58, 0.145)

    # Storms: sharp one/two-day drops, more often outside summer.
    storms = np.zeros(n)
    n_storms = 130
    storm_days = rng.choice(n, size=n_storms, replace=False)
    for day in storm_days:
        depth = rng.uniform(0.35, 1.3)
        if 0.35 < yearly_pos[day] < 0.7:
            depth *= 0.55
        storms[day] -= depth
        if day + 1 < n and rng.uniform() < 0.45:
            storms[day + 1] -= 0.4 * depth

    # Holiday commute dips.
    holidays = np.zeros(n)
    for i in range(n):
        day = start + dt.timedelta(days=i)
        if (day.month, day.day) in {(1, 1), (7, 4), (12, 25), (11, 11)}:
            holidays[i] -= 0.28
        if day.month == 11 and day.weekday() == 3 and 22 <= day.day <= 28:
            holidays[i] -= 0.33  # Thanksgiving

    log_y = trend + yearly + weekly + noise + storms + holidays
    y = np.maximum(np.round(np.exp(log_y)), 50.0).astype(int)

    missing = rng.choice(n, size=12, replace=False)
    write_csv(path, start, y, missing)


if __name__ == "__main__":
    make_peyton("peyton_manning.csv")
    make_bike("bike_sharing_daily.csv")
    print("fixtures written")
