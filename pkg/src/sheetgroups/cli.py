"""Command-line entry point.

Stages are file based::

    sheetgroups ingest corpus/ --out grids/
    sheetgroups extract grids/ --out features.jsonl
    sheetgroups cluster grids/ --out manifest.json
    sheetgroups train grids/ --labels labels.json --out thresholds.json
    sheetgroups eval --manifest manifest.json --ground-truth truth.json
    sheetgroups report --manifest manifest.json --ground-truth truth.json

Exit codes: 0 success, 1 finished but skipped more files than allowed,
2 usage or fatal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .cluster import DEFAULT_THETA_SP, DEFAULT_THETA_WS, Thresholds, cluster, manifest_bytes
from .evaluate import diagnoses_csv, diagnosis_counts, diff_groups, evaluate
from .features import build_features, workbook_sheet_features
from .grid import GridError
from .headers import dump_regions
from .ingest import CorpusError, convert_corpus, grid_name, scan_corpus, write_grid
from .parallel import default_jobs
from .similarity import SimilarityIndex
from .textnorm import TextNormalizer
from .train import LabelError, LabeledPartition, grid_search, surface_csv

log = logging.getLogger("sheetgroups")

EXIT_OK, EXIT_SKIPS, EXIT_FATAL = 0, 1, 2

CONFIG_KEYS = {
    "theta_ws": float,
    "theta_sp": float,
    "jobs": int,
    "stopwords_file": str,
    "artifact_words_file": str,
    "max_skips": int,
    "recursive": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


class Fatal(Exception):
    pass


def read_config(path) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise Fatal(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise Fatal(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise Fatal(f"{path}:{n}: bad value for {key}: {value!r}") from None
    return out


def _unit_interval(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must be in [0, 1], got {v}")
    return v


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _setting(args, key, default=None):
    v = getattr(args, key, None)
    if v is not None:
        return v
    return args.config_values.get(key, default)


def _jobs(args) -> int:
    jobs = _setting(args, "jobs", default_jobs())
    if jobs < 1:
        raise Fatal("jobs must be >= 1")
    return jobs


def _normalizer(args) -> TextNormalizer:
    return TextNormalizer.default(
        _setting(args, "stopwords_file"), _setting(args, "artifact_words_file")
    )


def _write(path, data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise Fatal(f"cannot write {path}: {e}") from None


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _load_workbooks(args):
    try:
        workbooks, report = scan_corpus(args.corpus, bool(_setting(args, "recursive", False)), _jobs(args))
    except CorpusError as e:
        raise Fatal(str(e)) from None
    log.info("corpus: %d workbooks, %d skipped", report.converted, len(report.skipped))
    seen, unique = set(), []
    for wb in workbooks:
        if wb.id in seen:
            log.warning("dropping duplicate workbook %s (%s)", wb.id, wb.filename)
            continue
        seen.add(wb.id)
        unique.append(wb)
    return unique


def _thresholds(args) -> Thresholds:
    base = {"theta_ws": DEFAULT_THETA_WS, "theta_sp": DEFAULT_THETA_SP}
    if args.thresholds:
        try:
            obj = json.loads(Path(args.thresholds).read_text("utf-8"))
            base = {"theta_ws": obj["theta_ws"], "theta_sp": obj["theta_sp"]}
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise Fatal(f"bad thresholds file {args.thresholds}: {e}") from None
    for key in base:
        v = getattr(args, key)
        if v is None:
            v = args.config_values.get(key)
        if v is not None:
            base[key] = v
    try:
        return Thresholds(**base)
    except ValueError as e:
        raise Fatal(str(e)) from None


def _read_groups(path, *, allow_singletons: bool = True) -> dict:
    """gid -> member list from a manifest-schema file."""
    try:
        obj = json.loads(Path(path).read_text("utf-8"))
    except (OSError, ValueError) as e:
        raise Fatal(f"cannot read {path}: {e}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("groups"), list):
        raise Fatal(f"{path}: expected an object with a 'groups' list")
    out = {}
    for k, g in enumerate(obj["groups"], 1):
        if not isinstance(g, dict) or not isinstance(g.get("members"), list) \
                or not all(isinstance(m, str) for m in g["members"]):
            raise Fatal(f"{path}: group {k} must have a 'members' list of ids")
        gid = g.get("gid", f"g{k:04d}")
        if gid in out:
            raise Fatal(f"{path}: duplicate gid {gid!r}")
        out[gid] = g["members"]
    return out


def cmd_ingest(args) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise Fatal(f"cannot create {out_dir}: {e}") from None
    recursive = bool(_setting(args, "recursive", False))
    try:
        converted, report = convert_corpus(args.dir, recursive, _jobs(args))
    except CorpusError as e:
        raise Fatal(str(e)) from None
    root = Path(args.dir)
    for path, wb in converted:
        rel = Path(path).relative_to(root).parent
        target = out_dir / rel / grid_name(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            write_grid(wb, target)
        except OSError as e:
            raise Fatal(f"cannot write {target}: {e}") from None
    sys.stdout.write(_json_bytes(report.to_dict()).decode("utf-8"))
    max_skips = _setting(args, "max_skips")
    if max_skips is not None and len(report.skipped) > max_skips:
        return EXIT_SKIPS
    return EXIT_OK


def cmd_extract(args) -> int:
    workbooks = _load_workbooks(args)
    norm = _normalizer(args)
    lines = []
    for wb in sorted(workbooks, key=lambda w: w.id):
        for sf in workbook_sheet_features(wb, norm):
            if sf.usable:
                lines.append(json.dumps(sf.to_record(), ensure_ascii=False, separators=(",", ":")))
    _write(args.out, "".join(line + "\n" for line in lines))
    if args.dump_regions:
        dump = []
        for wb in sorted(workbooks, key=lambda w: w.id):
            for ws in wb.sheets:
                dump.extend(f"{wb.id}\t{line}" for line in dump_regions(ws))
        _write(args.dump_regions, "".join(line + "\n" for line in dump))
    return EXIT_OK


def cmd_cluster(args) -> int:
    thresholds = _thresholds(args)
    workbooks = _load_workbooks(args)
    jobs = _jobs(args)
    features = build_features(workbooks, _normalizer(args), jobs)
    index = SimilarityIndex(features, jobs=jobs)
    result = cluster(features, thresholds, index=index)
    log.info("%d groups, %d singletons", len(result.groups), len(result.singletons))
    _write(args.out, manifest_bytes(result, thresholds))
    if args.dump_sims:
        rows = ["id_a,id_b,s_sp"] + [f"{a},{b},{s!r}" for a, b, s in index.pair_scores(thresholds.theta_ws)]
        _write(args.dump_sims, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_train(args) -> int:
    labels = _read_groups(args.labels)
    if not labels:
        raise Fatal(f"{args.labels}: no labeled groups")
    try:
        truth = LabeledPartition(tuple(labels.values()))
    except LabelError as e:
        raise Fatal(str(e)) from None
    workbooks = _load_workbooks(args)
    known = {wb.id for wb in workbooks}
    for gid in sorted(labels):
        for m in labels[gid]:
            if m not in known:
                raise Fatal(f"label id {m!r} (group {gid}) is not in the corpus")
    jobs = _jobs(args)
    features = build_features(workbooks, _normalizer(args), jobs)
    result = grid_search(features, truth, jobs=jobs)
    log.info("best theta_ws=%.2f theta_sp=%.2f F=%.4f", result.best.theta_ws, result.best.theta_sp, result.best_f)
    _write(args.out, _json_bytes({**result.best.to_dict(), "overall_f": result.best_f}))
    if args.surface:
        _write(args.surface, surface_csv(result))
    return EXIT_OK


def cmd_eval(args) -> int:
    detected = _read_groups(args.manifest)
    truth = list(_read_groups(args.ground_truth).values())
    validated = list(_read_groups(args.validated).values()) if args.validated else truth
    report = evaluate(detected, validated, truth)
    if args.out:
        _write(args.out, _json_bytes(report.to_dict()))
        sys.stdout.write(report.table())
    else:
        sys.stdout.write(_json_bytes(report.to_dict()).decode("utf-8"))
    if args.csv:
        _write(args.csv, diagnoses_csv(diff_groups(detected, truth)))
    return EXIT_OK


def cmd_report(args) -> int:
    detected = _read_groups(args.manifest)
    truth = list(_read_groups(args.ground_truth).values())
    diagnoses = diff_groups(detected, truth)
    counts = diagnosis_counts(diagnoses)
    lines = [f"{'ground-truth groups':<20}{len(truth):>8}"]
    lines += [f"{cat:<20}{n:>8}" for cat, n in counts.items()]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.csv:
        _write(args.csv, diagnoses_csv(diagnoses))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file; flags win")
    common.add_argument("--jobs", type=_positive_int, help="worker processes (default: all cores)")
    common.add_argument("-v", "--verbose", action="store_true")

    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument("corpus", help="directory of .grid.json / .xlsx files")
    corpus.add_argument("--recursive", action="store_true", default=None)
    corpus.add_argument("--stopwords-file", dest="stopwords_file")
    corpus.add_argument("--artifact-words-file", dest="artifact_words_file")

    p = argparse.ArgumentParser(prog="sheetgroups", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="convert files to .grid.json")
    s.add_argument("dir")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--recursive", action="store_true", default=None)
    s.add_argument("--max-skips", dest="max_skips", type=int, help="exit 1 when more files are skipped")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("extract", parents=[common, corpus], help="dump per-sheet features")
    s.add_argument("--out", default="-", help="JSON-lines output (default stdout)")
    s.add_argument("--dump-regions", dest="dump_regions", help="write table regions and headers here")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("cluster", parents=[common, corpus], help="cluster into evolution groups")
    s.add_argument("--out", default="-", help="manifest path (default stdout)")
    s.add_argument("--theta-ws", dest="theta_ws", type=_unit_interval)
    s.add_argument("--theta-sp", dest="theta_sp", type=_unit_interval)
    s.add_argument("--thresholds", help="trained thresholds JSON")
    s.add_argument("--dump-sims", dest="dump_sims", help="write pairwise scores CSV here")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("train", parents=[common, corpus], help="learn thresholds from labels")
    s.add_argument("--labels", required=True)
    s.add_argument("--out", default="-")
    s.add_argument("--surface", help="write the full F surface CSV here")
    s.set_defaults(func=cmd_train)

    for name, fn, help_ in (("eval", cmd_eval, "precision/recall/F against ground truth"),
                            ("report", cmd_report, "per-group diagnosis against ground truth")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--manifest", required=True)
        s.add_argument("--ground-truth", dest="ground_truth", required=True)
        s.add_argument("--csv", help="per ground-truth group diagnosis CSV")
        if name == "eval":
            s.add_argument("--validated", help="validated groups (default: ground truth)")
            s.add_argument("--out", help="JSON report path; a text table then goes to stdout")
        s.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args.config_values = read_config(args.config) if args.config else {}
        for key in ("theta_ws", "theta_sp"):
            v = args.config_values.get(key)
            if v is not None and not 0.0 <= v <= 1.0:
                raise Fatal(f"config {key} must be in [0, 1]")
        return args.func(args)
    except (Fatal, GridError, LabelError, OSError) as e:
        print(f"sheetgroups: error: {e}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
