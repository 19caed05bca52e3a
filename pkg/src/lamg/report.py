"""Suite reports: aggregation, JSON/CSV serialization, and the summary
figure.  Witnesses are written as standalone JSON files so a failing
case can be replayed from its file alone."""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class SuiteReport:
    suite: str
    cases: int
    holds: int
    fails: int
    inconclusive: int
    wall_seconds: float
    config: dict
    rows: list = field(default_factory=list)       # one dict per case
    witnesses: list = field(default_factory=list)  # one dict per failing case
    notes: dict = field(default_factory=dict)

    def consistent(self) -> bool:
        return self.holds + self.fails + self.inconclusive == self.cases

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "holds": self.holds,
            "fails": self.fails,
            "inconclusive": self.inconclusive,
            "wall_seconds": round(self.wall_seconds, 3),
            "config": self.config,
            "notes": self.notes,
            "rows": self.rows,
        }


def write_report(report: SuiteReport, outdir) -> Path:
    """Write report.json, cases.csv, per-case witness files, and the
    summary figure into outdir.  Returns the report.json path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for w in report.witnesses:
        name = f"witness_case{w['case']}.json"
        (outdir / name).write_text(json.dumps(w, indent=2) + "\n")
    path = outdir / "report.json"
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    with open(outdir / "cases.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["case", "verdict", "cause", "detail"])
        writer.writeheader()
        for row in report.rows:
            writer.writerow({k: row.get(k, "") for k in writer.fieldnames})
    render_figure(report, outdir / "summary.png")
    return path


def render_figure(report: SuiteReport, path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts = [report.holds, report.fails, report.inconclusive]
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    ax.bar(["holds", "fails", "inconclusive"], counts,
           color=["#2a9d8f", "#e76f51", "#e9c46a"])
    for i, n in enumerate(counts):
        ax.text(i, n, str(n), ha="center", va="bottom", fontsize=9)
    seed = report.config.get("seed")
    ax.set_title(f"{report.suite}: {report.cases} cases, seed {seed}", fontsize=10)
    ax.set_ylabel("cases")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
