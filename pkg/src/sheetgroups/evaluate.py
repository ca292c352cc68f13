"""Exact-match precision/recall/F of detected groups, and per-group diagnosis."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping

CORRECT = "Correct"
GMISSED = "GMissed"
FMISSED = "FMissed"
SPLIT = "Split"
MIXED = "Mixed"
MULTICASE = "MultiCase"
CATEGORIES = (CORRECT, GMISSED, FMISSED, SPLIT, MIXED, MULTICASE)


@dataclass
class EvalReport:
    precision: float
    recall: float
    f_measure: float
    n_detected: int
    n_correct_vs_validated: int
    n_correct_vs_all: int
    n_ground_truth: int
    per_group_status: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        rows = [
            ("detected groups", str(self.n_detected)),
            ("correct (validated)", str(self.n_correct_vs_validated)),
            ("ground-truth groups", str(self.n_ground_truth)),
            ("correct (ground truth)", str(self.n_correct_vs_all)),
            ("precision", f"{100 * self.precision:.1f}%"),
            ("recall", f"{100 * self.recall:.1f}%"),
            ("F-measure", f"{100 * self.f_measure:.1f}%"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v:>8}" for k, v in rows) + "\n"


def _as_groups(groups) -> dict[str, frozenset]:
    if isinstance(groups, Mapping):
        return {str(k): frozenset(v) for k, v in groups.items()}
    return {f"g{k:04d}": frozenset(g) for k, g in enumerate(groups, 1)}


def f_measure(precision: float, recall: float) -> float:
    if precision == 0 or recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate(clustered, validated: Iterable[Iterable[str]], ground_truth: Iterable[Iterable[str]]) -> EvalReport:
    """A detected group is correct only if it equals a reference group exactly.

    ``clustered`` is a gid -> members mapping or a list of member sets. Groups
    with fewer than two members are not detected groups and are ignored.
    """
    detected = {gid: g for gid, g in _as_groups(clustered).items() if len(g) >= 2}
    validated_set = {frozenset(g) for g in validated}
    truth = [frozenset(g) for g in ground_truth]
    truth_set = set(truth)

    status = {gid: ("correct" if g in validated_set else "incorrect") for gid, g in sorted(detected.items())}
    n_ok_val = sum(1 for g in detected.values() if g in validated_set)
    n_ok_all = sum(1 for g in detected.values() if g in truth_set)
    precision = n_ok_val / len(detected) if detected else 0.0
    recall = n_ok_all / len(truth) if truth else 0.0
    return EvalReport(precision, recall, f_measure(precision, recall), len(detected),
                      n_ok_val, n_ok_all, len(truth), status)


def diagnose(truth: frozenset, detected: Iterable[frozenset]) -> str:
    touching = [d for d in detected if d & truth]
    if not touching:
        return GMISSED
    if len(touching) == 1 and touching[0] == truth:
        return CORRECT
    covered = frozenset().union(*(d & truth for d in touching))
    cases = []
    if covered != truth:
        cases.append(FMISSED)
    if len(touching) >= 2:
        cases.append(SPLIT)
    if any(not d <= truth for d in touching):
        cases.append(MIXED)
    return cases[0] if len(cases) == 1 else MULTICASE


def diff_groups(clustered, ground_truth: Iterable[Iterable[str]]) -> list[tuple[tuple[str, ...], str]]:
    """Classify each ground-truth group against the detected groups.

    FMissed: members lost but nothing foreign mixed in, one detected group.
    Split: spread over several pure detected groups, nothing lost.
    Mixed: some detected group holding members also holds foreign ids.
    MultiCase: more than one of the above at once.
    """
    detected = [g for g in _as_groups(clustered).values() if len(g) >= 2]
    out = []
    for t in ground_truth:
        t = frozenset(t)
        out.append((tuple(sorted(t)), diagnose(t, detected)))
    return out


def diagnosis_counts(diagnoses) -> dict[str, int]:
    counts = {c: 0 for c in CATEGORIES}
    for _, cat in diagnoses:
        counts[cat] += 1
    return counts


def diagnoses_csv(diagnoses) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "size", "diagnosis", "members"])
    for k, (members, cat) in enumerate(diagnoses, 1):
        w.writerow([f"t{k:04d}", len(members), cat, " ".join(members)])
    return buf.getvalue()
