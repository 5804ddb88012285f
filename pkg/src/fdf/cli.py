"""Operator entry points.

    fdf serve     --routes routes.json --addr HOST:PORT [--data-dir DIR]
    fdf simulate  --scenario s.json --seat-map m.json [--in-process] --out DIR
    fdf detect    --frames DIR --seat-map m.json --out counts.csv
    fdf eval      --truth t.csv --counts c.csv --out report.csv

Exit codes: 0 success, 2 input error, 3 runtime/transport error. Anything
that changes outputs is a flag; only the service address (FDF_ADDR) and
log level (FDF_LOG_LEVEL) may come from the environment.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from collections import defaultdict
from pathlib import Path

from .datacenter import Datacenter, create_app
from .errors import ConfigError, Error, RouteValidationError, ShapeError, TransportError
from .geo import load_network
from .sim import HttpGateway, InProcessGateway, load_scenario, run_scenario
from .vision import (
    DetectionReport,
    assign_blobs_to_seats,
    count_availability,
    extract_blobs,
    init_background,
    load_seat_map,
    MixtureConfig,
    parse_frame_filename,
    read_pgm,
    update_background,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3

DEFAULT_ADDR = "127.0.0.1:8000"

log = logging.getLogger("fdf")


class InputError(Exception):
    """Operator-facing problem with the provided files or flags."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdf", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--log-level",
        default=os.environ.get("FDF_LOG_LEVEL", "INFO"),
        help="logging level (env FDF_LOG_LEVEL)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the datacenter HTTP service")
    serve.add_argument("--routes", required=True, help="route network JSON file")
    serve.add_argument(
        "--addr", default=os.environ.get("FDF_ADDR", DEFAULT_ADDR), help="HOST:PORT to bind"
    )
    serve.add_argument("--data-dir", default=None, help="event-log directory (default: in-memory)")

    simulate = sub.add_parser("simulate", help="run a fleet scenario")
    simulate.add_argument("--scenario", required=True, help="scenario JSON file")
    simulate.add_argument("--seat-map", required=True, help="seat map JSON file")
    simulate.add_argument(
        "--in-process", action="store_true", help="use an in-memory datacenter instead of HTTP"
    )
    simulate.add_argument(
        "--addr",
        default=os.environ.get("FDF_ADDR", DEFAULT_ADDR),
        help="datacenter address when not --in-process",
    )
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.add_argument("--dump-frames", default=None, help="also write rendered frames here")

    detect = sub.add_parser("detect", help="count occupied seats in a directory of PGM frames")
    detect.add_argument("--frames", required=True, help="directory of <bus>_<timestamp>.pgm files")
    detect.add_argument("--seat-map", required=True, help="seat map JSON file")
    detect.add_argument("--out", required=True, help="output CSV (timestamp,occupied,empty,total)")
    detect.add_argument("--min-area", type=int, default=30, help="smallest blob kept, in pixels")

    evaluate = sub.add_parser("eval", help="score detected counts against ground truth")
    evaluate.add_argument("--truth", required=True, help="CSV with an 'occupied' column (actual)")
    evaluate.add_argument("--counts", required=True, help="CSV with an 'occupied' column (detected)")
    evaluate.add_argument("--out", required=True, help="output report CSV")

    return parser


def cmd_serve(args) -> int:
    import uvicorn

    try:
        stops, routes = load_network(args.routes)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot read routes file {args.routes}: {exc}") from exc
    dc = Datacenter(args.data_dir)
    try:
        for stop in stops:
            dc.register_stop(stop)
        for route in routes:
            dc.register_route(route)
    except RouteValidationError as exc:
        lines = "\n".join(f"  - {v}" for v in exc.violations)
        raise InputError(f"invalid routes file {args.routes}:\n{lines}") from exc
    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        raise InputError(f"--addr must be HOST:PORT, got {args.addr!r}")
    app = create_app(dc)
    log.info("serving datacenter on %s (%d stops, %d routes)", args.addr, len(stops), len(routes))
    try:
        uvicorn.run(app, host=host, port=int(port), log_level=args.log_level.lower())
    finally:
        dc.close()
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        config = load_scenario(args.scenario)
        seat_map = load_seat_map(args.seat_map)
    except (OSError, ValueError, KeyError, ConfigError) as exc:
        raise InputError(f"cannot load inputs: {exc}") from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    gateway = InProcessGateway(Datacenter()) if args.in_process else HttpGateway(f"http://{args.addr}")
    try:
        result = run_scenario(
            config,
            {seat_map.bus_model_id: seat_map},
            gateway=gateway,
            frame_dump_dir=args.dump_frames,
        )
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    except TransportError as exc:
        if exc.trace is not None:
            exc.trace.save_jsonl(out_dir / "trace.jsonl")
            log.error("partial trace written to %s", out_dir / "trace.jsonl")
        raise

    result.trace.save_jsonl(out_dir / "trace.jsonl")
    result.detection_report.save_csv(out_dir / "report.csv")
    log.info(
        "simulated %d sim-seconds: %d reports, %d scored rows",
        config.duration,
        len(result.samples),
        len(result.detection_report.rows),
    )
    return EXIT_OK


def _load_frames(frames_dir: Path):
    files = sorted(frames_dir.glob("*.pgm"))
    if len(files) < 2:
        raise InputError(
            f"{frames_dir}: need at least 2 PGM frames (first is background warm-up), found {len(files)}"
        )
    by_bus = defaultdict(list)
    for path in files:
        try:
            bus_id, timestamp = parse_frame_filename(path.name)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        by_bus[bus_id].append((timestamp, path))
    if len(by_bus) != 1:
        raise InputError(
            f"{frames_dir}: frames from multiple buses {sorted(by_bus)}; detect expects one stream"
        )
    ((bus_id, entries),) = by_bus.items()
    entries.sort()
    return [read_pgm(path, timestamp=t) for t, path in entries]


def cmd_detect(args) -> int:
    frames_dir = Path(args.frames)
    if not frames_dir.is_dir():
        raise InputError(f"{frames_dir}: not a directory")
    try:
        seat_map = load_seat_map(args.seat_map)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot load seat map: {exc}") from exc
    frames = _load_frames(frames_dir)

    try:
        seat_map.check_frame_bounds(frames[0].width, frames[0].height)
        model = init_background(frames[0], MixtureConfig())
        rows = []
        for frame in frames[1:]:
            mask = update_background(model, frame)
            blobs = extract_blobs(mask, min_area=args.min_area)
            occupied, empty, total = count_availability(assign_blobs_to_seats(blobs, seat_map))
            rows.append((frame.timestamp, occupied, empty, total))
    except ShapeError as exc:
        raise InputError(str(exc)) from exc

    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["timestamp", "occupied", "empty", "total"])
        writer.writerows(rows)
    log.info("wrote %d detection rows to %s", len(rows), args.out)
    return EXIT_OK


def _read_occupied_column(path: str) -> list[int]:
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or "occupied" not in reader.fieldnames:
                raise InputError(f"{path}: missing 'occupied' column")
            return [int(row["occupied"]) for row in reader]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: bad count value: {exc}") from exc


def cmd_eval(args) -> int:
    truth = _read_occupied_column(args.truth)
    counts = _read_occupied_column(args.counts)
    if len(truth) != len(counts):
        raise InputError(
            f"misaligned files: {args.truth} has {len(truth)} rows, {args.counts} has {len(counts)}"
        )
    pairs = [(a, d) for a, d in zip(truth, counts) if a > 0]
    report = DetectionReport.from_counts(pairs)
    report.save_csv(args.out)
    log.info("wrote report with %d rows to %s", len(report.rows), args.out)
    return EXIT_OK


COMMANDS = {
    "serve": cmd_serve,
    "simulate": cmd_simulate,
    "detect": cmd_detect,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
