"""Attack scoring from externally produced prediction files.

The success rate counts every attacked sample whose predicted class differs
from the true label, including samples the classifier already got wrong on
the clean input.  The flip rate is the stricter companion metric: of the
samples that were clean-correct, how many the attack broke.  All rates are
integer counts divided once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError

PREDS_MAGIC = "fakeweather-preds v1"

N_CLASSES = 10


@dataclass(frozen=True)
class PredictionRecord:
    """One sample: its true class and the argmax class before/after attack."""

    index: int
    true_label: int
    clean_pred: int
    adv_pred: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"index must be >= 0, got {self.index!r}")
        for name in ("true_label", "clean_pred", "adv_pred"):
            v = getattr(self, name)
            if not 0 <= v < N_CLASSES:
                raise ValueError(f"{name} must be in 0..{N_CLASSES - 1}, got {v!r}")


@dataclass(frozen=True)
class EvalReport:
    n: int
    asr: float
    clean_accuracy: float
    flip_rate: float
    #: True when no record was clean-correct, leaving flip_rate undefined
    #: (reported as 0.0).
    flip_rate_degenerate: bool
    #: confusion[true_label][adv_pred], entries summing to n.
    confusion: tuple[tuple[int, ...], ...]


def _check_nonempty(records: list[PredictionRecord]) -> None:
    if not records:
        raise ValueError("need at least one prediction record")


def _check_unique_indices(records: list[PredictionRecord]) -> None:
    seen: set[int] = set()
    for r in records:
        if r.index in seen:
            raise ValueError(f"duplicate sample index {r.index}")
        seen.add(r.index)


def compute_asr(records: list[PredictionRecord]) -> float:
    """Misclassified-under-attack count over total count."""
    _check_nonempty(records)
    wrong = sum(1 for r in records if r.adv_pred != r.true_label)
    return wrong / len(records)


def compute_report(records: list[PredictionRecord]) -> EvalReport:
    _check_nonempty(records)
    _check_unique_indices(records)
    n = len(records)
    adv_wrong = 0
    clean_right = 0
    flipped = 0
    confusion = [[0] * N_CLASSES for _ in range(N_CLASSES)]
    for r in records:
        if r.adv_pred != r.true_label:
            adv_wrong += 1
        if r.clean_pred == r.true_label:
            clean_right += 1
            if r.adv_pred != r.true_label:
                flipped += 1
        confusion[r.true_label][r.adv_pred] += 1
    degenerate = clean_right == 0
    return EvalReport(
        n=n,
        asr=adv_wrong / n,
        clean_accuracy=clean_right / n,
        flip_rate=0.0 if degenerate else flipped / clean_right,
        flip_rate_degenerate=degenerate,
        confusion=tuple(tuple(row) for row in confusion),
    )


# --- prediction file format --------------------------------------------------
#
# fakeweather-preds v1
# <index>,<true_label>,<clean_pred>,<adv_pred>      one line per sample


def parse_predictions(text: str) -> list[PredictionRecord]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty prediction file")
    if lines[0] != PREDS_MAGIC:
        raise FormatError(f"bad magic {lines[0]!r}, expected {PREDS_MAGIC!r}", line=1)
    records = []
    seen: set[int] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise FormatError(f"expected 4 comma-separated fields, got {len(parts)}", line=lineno)
        try:
            rec = PredictionRecord(*(int(p) for p in parts))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from exc
        if rec.index in seen:
            raise FormatError(f"duplicate sample index {rec.index}", line=lineno)
        seen.add(rec.index)
        records.append(rec)
    if not records:
        raise FormatError("prediction file holds no records")
    return records


def format_predictions(records: list[PredictionRecord]) -> str:
    lines = [PREDS_MAGIC]
    lines.extend(
        f"{r.index},{r.true_label},{r.clean_pred},{r.adv_pred}" for r in records
    )
    return "\n".join(lines) + "\n"


def read_predictions_file(path) -> list[PredictionRecord]:
    with open(path, "r", encoding="ascii", newline="\n") as f:
        return parse_predictions(f.read())


# --- report rendering ---------------------------------------------------------


def render_report_kv(report: EvalReport) -> str:
    """Machine-readable key=value block."""
    lines = [
        f"n={report.n}",
        f"asr={report.asr!r}",
        f"clean_accuracy={report.clean_accuracy!r}",
        f"flip_rate={report.flip_rate!r}",
        f"flip_rate_degenerate={int(report.flip_rate_degenerate)}",
    ]
    for t, row in enumerate(report.confusion):
        lines.append(f"confusion_{t}=" + ",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def render_report_table(report: EvalReport) -> str:
    lines = [
        f"samples              {report.n}",
        f"attack success rate  {report.asr:.4f} ({report.asr:.1%})",
        f"clean accuracy       {report.clean_accuracy:.4f} ({report.clean_accuracy:.1%})",
    ]
    if report.flip_rate_degenerate:
        lines.append("flip rate            n/a (no clean-correct samples)")
    else:
        lines.append(
            f"flip rate            {report.flip_rate:.4f} ({report.flip_rate:.1%})"
        )
    lines.append("")
    lines.append("confusion (rows: true class, cols: predicted under attack)")
    header = "      " + " ".join(f"{c:>4}" for c in range(N_CLASSES))
    lines.append(header)
    for t, row in enumerate(report.confusion):
        lines.append(f"  {t:>2}  " + " ".join(f"{c:>4}" for c in row))
    return "\n".join(lines) + "\n"
