"""Seeded instance generators: Line, Plane, and Taxi CSV ingestion.

Line and Plane draw 200 uniform vertices, then 100 servers without
replacement and 100 requests with replacement.  Taxi ingests a trip CSV,
samples a 5-minute boundary of the target day, and windows the latest 100
dropoffs before it (servers) against the earliest 100 pickups after it
(requests) under the Manhattan metric on raw (longitude, latitude) degrees.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .errors import DataInsufficiencyError, IngestionError, UsageError
from .harness import Instance
from .metric import MetricSpace

TS_FORMAT = "%m/%d/%Y %I:%M:%S %p"
TAXI_COLUMNS = (
    "Trip Start Timestamp",
    "Trip End Timestamp",
    "Pickup Centroid Longitude",
    "Pickup Centroid Latitude",
    "Dropoff Centroid Longitude",
    "Dropoff Centroid Latitude",
)
BOUNDARY_MINUTES = 5


@dataclass(frozen=True)
class GenConfig:
    klass: str
    n_vertices: int = 200
    n_servers: int = 100
    n_requests: int = 100
    seed: int = 0
    csv_path: str | None = None
    date: str | None = None  # "MM/DD/YYYY"; default: day of the earliest trip start

    def __post_init__(self):
        if self.klass not in ("line", "plane", "taxi"):
            raise UsageError(f"unknown instance class {self.klass!r}")
        if self.klass != "taxi" and self.n_vertices < self.n_servers:
            raise UsageError("need at least as many vertices as servers")
        if min(self.n_servers, self.n_requests) < 1:
            raise UsageError("need at least one server and one request")


def _rng(config: GenConfig, rng) -> np.random.Generator:
    return np.random.default_rng(config.seed) if rng is None else rng


def _draw_roles(config: GenConfig, rng) -> tuple[tuple[int, ...], tuple[int, ...]]:
    servers = rng.choice(config.n_vertices, size=config.n_servers, replace=False)
    requests = rng.choice(config.n_vertices, size=config.n_requests, replace=True)
    return tuple(int(i) for i in servers), tuple(int(i) for i in requests)


def gen_line(config: GenConfig, rng=None) -> Instance:
    rng = _rng(config, rng)
    coords = rng.random(config.n_vertices)
    servers, requests = _draw_roles(config, rng)
    space = MetricSpace(kind="line", points=tuple(float(x) for x in coords))
    return Instance(
        space=space,
        servers=servers,
        requests=requests,
        label=f"line-{config.seed}",
        seed=config.seed,
    )


def gen_plane(config: GenConfig, rng=None) -> Instance:
    rng = _rng(config, rng)
    coords = rng.random((config.n_vertices, 2))
    servers, requests = _draw_roles(config, rng)
    space = MetricSpace(
        kind="plane", points=tuple((float(x), float(y)) for x, y in coords)
    )
    return Instance(
        space=space,
        servers=servers,
        requests=requests,
        label=f"plane-{config.seed}",
        seed=config.seed,
    )


@dataclass(frozen=True)
class _Trip:
    start: datetime
    end: datetime
    pickup: tuple[float, float]
    dropoff: tuple[float, float]


def _read_trips(csv_path: str) -> list[_Trip]:
    trips: list[_Trip] = []
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in TAXI_COLUMNS if c not in header]
        if missing:
            raise IngestionError(f"missing columns {missing} in {csv_path}")
        for idx, row in enumerate(reader, start=2):
            values = [row.get(c) or "" for c in TAXI_COLUMNS]
            if any(v.strip() == "" for v in values):
                continue
            try:
                start = datetime.strptime(values[0].strip(), TS_FORMAT)
                end = datetime.strptime(values[1].strip(), TS_FORMAT)
                plon, plat, dlon, dlat = (float(v) for v in values[2:])
            except ValueError as exc:
                raise IngestionError(f"row {idx}: {exc}") from exc
            trips.append(_Trip(start=start, end=end, pickup=(plon, plat), dropoff=(dlon, dlat)))
    if not trips:
        raise DataInsufficiencyError(f"no usable rows in {csv_path}")
    return trips


def _day_boundaries(day: datetime) -> list[datetime]:
    step = timedelta(minutes=BOUNDARY_MINUTES)
    count = (24 * 60) // BOUNDARY_MINUTES
    return [day + i * step for i in range(count)]


def gen_taxi(config: GenConfig, csv_path: str | None = None, rng=None) -> Instance:
    rng = _rng(config, rng)
    path = csv_path or config.csv_path
    if path is None:
        raise UsageError("taxi generation needs a CSV path")
    trips = _read_trips(path)
    if config.date is not None:
        day = datetime.strptime(config.date, "%m/%d/%Y")
    else:
        day = min(t.start for t in trips).replace(hour=0, minute=0, second=0)

    boundaries = _day_boundaries(day)
    order = rng.permutation(len(boundaries))
    by_end = sorted(trips, key=lambda t: t.end)
    by_start = sorted(trips, key=lambda t: t.start)
    for idx in order:
        tau = boundaries[int(idx)]
        dropoffs = [t for t in by_end if t.end <= tau]
        pickups = [t for t in by_start if t.start >= tau]
        if len(dropoffs) < config.n_servers or len(pickups) < config.n_requests:
            continue
        server_trips = dropoffs[-config.n_servers :]
        request_trips = pickups[: config.n_requests]
        points = tuple(t.dropoff for t in server_trips) + tuple(
            t.pickup for t in request_trips
        )
        space = MetricSpace(kind="manhattan", points=points)
        return Instance(
            space=space,
            servers=tuple(range(config.n_servers)),
            requests=tuple(range(config.n_servers, config.n_servers + config.n_requests)),
            label=f"taxi-{config.seed}-{tau.strftime('%H%M')}",
            seed=config.seed,
        )
    raise DataInsufficiencyError(
        f"no 5-minute boundary of {day.date()} has {config.n_servers} dropoffs before "
        f"and {config.n_requests} pickups after"
    )


def generate(config: GenConfig, rng=None) -> Instance:
    if config.klass == "line":
        return gen_line(config, rng)
    if config.klass == "plane":
        return gen_plane(config, rng)
    return gen_taxi(config, rng=rng)
