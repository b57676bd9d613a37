"""Command line interface.

Subcommands: ``analyze`` (full pipeline, writes all artifacts),
``generate`` (scenario simulator), ``links``, ``summary`` and ``dfg``
(single-artifact variants of the pipeline). Exit codes: 0 success,
1 runtime error (I/O, bad data), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError, DataError
from .events import (
    ColumnMapping,
    Component,
    ComponentKind,
    EventLog,
    Segment,
    ingest_csv,
    parse_timestamp,
    write_event_csv,
)
from .features import View
from .framing import Framing, default_origin, parse_duration
from .generator import ScenarioConfig, generate
from .hlelog import FlattenOrder, export_dfg, summarize, write_hlel_csv, write_summary_csv
from .linkage import LinkTable
from .pipeline import AnalysisResult, analyze_log


@dataclass
class RunConfig:
    """Everything one `analyze` run depends on; echoed to the output
    directory so a run can be reproduced from its artifacts."""

    input: str
    out: str | None = None
    case_column: str = "case"
    activity_column: str = "activity"
    timestamp_column: str = "timestamp"
    resource_column: str = "resource"
    timestamp_format: str | None = None
    window_width: str = "1d"
    origin: str = "auto"
    percentile: float = 0.8
    lam: float = 0.5
    views: list[str] | None = None
    # component filters, settable through the JSON config only
    activities: list[str] | None = None
    resources: list[str] | None = None
    segments: list[list[str]] | None = None
    exclude_zeros: bool = False
    flatten_order_file: str | None = None
    summary_period: str = "1w"
    summary_top: int = 4
    include_zero_links: bool = False
    dump_matrix: bool = False

    def validate(self) -> None:
        if not 0 <= self.percentile <= 1:
            raise ConfigError(f"--percentile must lie in [0, 1], got {self.percentile}")
        if not 0 <= self.lam <= 1:
            raise ConfigError(f"--lambda must lie in [0, 1], got {self.lam}")
        parse_duration(self.window_width)
        parse_duration(self.summary_period)
        if self.views is not None:
            valid = {v.value for v in View}
            for name in self.views:
                if name not in valid:
                    raise ConfigError(f"unknown view {name!r}; choose from {sorted(valid)}")
        if self.summary_top < 1:
            raise ConfigError("--summary-top must be at least 1")
        if self.segments is not None:
            for pair in self.segments:
                if len(pair) != 2:
                    raise ConfigError(f"segments entries must be [from, to] pairs, got {pair}")

    def mapping(self) -> ColumnMapping:
        return ColumnMapping(
            case=self.case_column,
            activity=self.activity_column,
            timestamp=self.timestamp_column,
            resource=self.resource_column,
        )

    def view_selection(self) -> tuple[View, ...] | None:
        if self.views is None:
            return None
        return tuple(View(name) for name in self.views)

    @classmethod
    def from_json(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"{path}: unknown config fields {sorted(unknown)}")
        if "input" not in data:
            raise ConfigError(f"{path}: missing required field 'input'")
        return cls(**data)

    def write_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="highline",
        description="Detect system-level congestion behavior in process event logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pipeline = argparse.ArgumentParser(add_help=False)
    pipeline.add_argument("--input", "-i", help="input event log CSV")
    pipeline.add_argument("--config", help="JSON run configuration (flags override it)")
    pipeline.add_argument("--case-col", dest="case_column")
    pipeline.add_argument("--activity-col", dest="activity_column")
    pipeline.add_argument("--timestamp-col", dest="timestamp_column")
    pipeline.add_argument("--resource-col", dest="resource_column")
    pipeline.add_argument("--timestamp-format", dest="timestamp_format")
    pipeline.add_argument("--window-width", help="window width, e.g. 30m, 1h, 1d")
    pipeline.add_argument("--origin", help="window origin timestamp, or 'auto'")
    pipeline.add_argument("--percentile", "-p", type=float, help="threshold percentile in [0, 1]")
    pipeline.add_argument("--lambda", dest="lam", type=float, help="propagation threshold in [0, 1]")
    pipeline.add_argument("--views", help="comma-separated view subset")
    pipeline.add_argument("--exclude-zeros", action="store_true", default=None,
                          help="drop zero measurements from the threshold pools")
    pipeline.add_argument("--flatten-order", dest="flatten_order_file",
                          help="file with one high-level activity name per line")
    pipeline.add_argument("--summary-period", help="summary bucket size, e.g. 1w")
    pipeline.add_argument("--summary-top", type=int, help="high-level activities in the summary")

    p_analyze = sub.add_parser("analyze", parents=[pipeline],
                               help="run the pipeline and write all artifacts")
    p_analyze.add_argument("--out", "-o", help="output directory")
    p_analyze.add_argument("--include-zeros", action="store_true", default=None,
                           dest="include_zero_links", help="keep zero rows in links.csv")
    p_analyze.add_argument("--dump-matrix", action="store_true", default=None,
                           help="also write the evaluation matrix to matrix.csv")

    p_generate = sub.add_parser("generate", help="simulate the service-desk scenario")
    p_generate.add_argument("--seed", type=int, help="override the config seed")
    p_generate.add_argument("--config", help="scenario config JSON")
    p_generate.add_argument("--out", "-o", required=True, help="output CSV path")

    p_links = sub.add_parser("links", parents=[pipeline], help="dump the component link table")
    p_links.add_argument("--out", "-o", help="output CSV (default stdout)")
    p_links.add_argument("--include-zeros", action="store_true", default=None,
                         dest="include_zero_links", help="also list zero-valued pairs")

    p_summary = sub.add_parser("summary", parents=[pipeline],
                               help="per-period counts of events and high-level events")
    p_summary.add_argument("--out", "-o", help="output CSV (default stdout)")

    p_dfg = sub.add_parser("dfg", parents=[pipeline],
                           help="directly-follows graph of the flattened high-level log")
    p_dfg.add_argument("--out", "-o", help="output DOT file (default stdout)")

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    if args.config:
        config = RunConfig.from_json(args.config)
    else:
        if not args.input:
            raise ConfigError("--input is required (or provide --config)")
        config = RunConfig(input=args.input)
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    if "views" in overrides:
        overrides["views"] = [v.strip() for v in str(overrides["views"]).split(",") if v.strip()]
    for name, value in overrides.items():
        setattr(config, name, value)
    config.validate()
    return config


def _run_pipeline(config: RunConfig) -> AnalysisResult:
    log = ingest_csv(config.input, config.mapping(), config.timestamp_format)
    if config.origin == "auto":
        origin = default_origin(log)
    else:
        try:
            origin = parse_timestamp(config.origin, config.timestamp_format)
        except ValueError:
            raise ConfigError(f"unparseable --origin value {config.origin!r}") from None
    framing = Framing(origin=origin, width=parse_duration(config.window_width))
    order = (
        FlattenOrder.from_file(config.flatten_order_file)
        if config.flatten_order_file
        else None
    )
    return analyze_log(
        log,
        framing,
        percentile=config.percentile,
        lam=config.lam,
        views=config.view_selection(),
        activities=config.activities,
        resources=config.resources,
        segments=[Segment(*pair) for pair in config.segments] if config.segments else None,
        exclude_zeros=config.exclude_zeros,
        flatten_order=order,
    )


def _write_links_csv(links: LinkTable, log: EventLog, path_or_fh, include_zeros: bool) -> None:
    def rows():
        if not include_zeros:
            for c1, c2, value in links.pairs():
                yield c1, c2, value
            return
        components = sorted(
            [Component.activity(a) for a in log.activities]
            + [Component.resource(r) for r in log.resources]
            + [Component(ComponentKind.SEGMENT, s) for s in log.segments],
            key=Component.sort_key,
        )
        for i, c1 in enumerate(components):
            for c2 in components[i + 1 :]:
                yield c1, c2, links.value(c1, c2)

    def write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind1", "component1", "kind2", "component2", "link"])
        for c1, c2, value in rows():
            writer.writerow([c1.kind.value, c1.label, c2.kind.value, c2.label, repr(value)])

    if isinstance(path_or_fh, str):
        with open(path_or_fh, "w", newline="", encoding="utf-8") as fh:
            write(fh)
    else:
        write(path_or_fh)


def _write_matrix_csv(result: AnalysisResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["view", "component", "window", "value"])
        for fid, w, value in result.matrix.defined():
            writer.writerow([fid.view.value, fid.component.label, w, repr(value)])


def run_analyze(config: RunConfig) -> AnalysisResult:
    """The `analyze` subcommand: run the pipeline and write the artifact
    files (hlel.csv, links.csv, summary.csv, dfg.dot, config.json)."""
    if not config.out:
        raise ConfigError("--out directory is required")
    result = _run_pipeline(config)
    os.makedirs(config.out, exist_ok=True)

    def out(name: str) -> str:
        return os.path.join(config.out, name)

    write_hlel_csv(result.entries, out("hlel.csv"), config.timestamp_format)
    _write_links_csv(result.links, result.log, out("links.csv"), config.include_zero_links)
    table = summarize(
        result.log,
        result.entries,
        parse_duration(config.summary_period),
        result.framing.origin,
        top=config.summary_top,
    )
    write_summary_csv(table, out("summary.csv"), config.timestamp_format)
    with open(out("dfg.dot"), "w", encoding="utf-8") as fh:
        fh.write(export_dfg(result.flattened))
    config.write_json(out("config.json"))
    if config.dump_matrix:
        _write_matrix_csv(result, out("matrix.csv"))
    return result


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            config = _run_config(args)
            result = run_analyze(config)
            print(f"events: {len(result.log)}")
            print(f"windows: {len(result.windows)}")
            print(f"high-level events: {len(result.hles)}")
            print(f"cascades: {result.cascade_count}")
            print(f"artifacts written to {config.out}")
        elif args.command == "generate":
            if args.config:
                scenario = ScenarioConfig.from_json(args.config)
            else:
                scenario = ScenarioConfig()
            if args.seed is not None:
                scenario = ScenarioConfig.from_dict({**scenario.to_dict(), "seed": args.seed})
            log = generate(scenario)
            write_event_csv(log, args.out)
            cases = len({e.case for e in log})
            print(f"generated {len(log)} events over {cases} cases -> {args.out}")
        elif args.command == "links":
            config = _run_config(args)
            result = _run_pipeline(config)
            if args.out:
                _write_links_csv(result.links, result.log, args.out, config.include_zero_links)
            else:
                _write_links_csv(result.links, result.log, sys.stdout, config.include_zero_links)
        elif args.command == "summary":
            config = _run_config(args)
            result = _run_pipeline(config)
            table = summarize(
                result.log,
                result.entries,
                parse_duration(config.summary_period),
                result.framing.origin,
                top=config.summary_top,
            )
            if args.out:
                write_summary_csv(table, args.out, config.timestamp_format)
            else:
                _print_summary(table)
        elif args.command == "dfg":
            config = _run_config(args)
            result = _run_pipeline(config)
            text = export_dfg(result.flattened)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        # unknown component in a selection
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _print_summary(table) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    header = ["period", "start", "events", "hles"]
    for a in table.activities:
        header.extend([f"count:{a}", f"avg:{a}"])
    writer.writerow(header)
    for row in table.rows:
        record = [row.period, row.start.isoformat(), row.events, row.hles]
        for count, avg in zip(row.counts, row.averages):
            record.append(count)
            record.append("" if avg is None else f"{avg:.6g}")
        writer.writerow(record)


if __name__ == "__main__":
    sys.exit(main())
