"""Selftest report: a delimited text block plus matplotlib figures."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .acceptance import CriterionResult  # noqa: E402


def delimited(results: Sequence[CriterionResult]) -> str:
    lines = ["=== hecke-forge selftest ==="]
    for r in results:
        lines.append(r.line())
    passed = sum(r.passed for r in results)
    lines.append(f"--- {passed}/{len(results)} criteria passed ---")
    return "\n".join(lines)


def _runtime_figure(results, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = [r.number for r in results]
    colors = ["tab:green" if r.passed else "tab:red" for r in results]
    ax.bar(xs, [max(r.seconds, 1e-3) for r in results], color=colors, label="runtime")
    ax.scatter(xs, [r.budget for r in results], marker="_", s=400, color="black", label="budget")
    ax.set_yscale("log")
    ax.set_xticks(xs)
    ax.set_xlabel("criterion")
    ax.set_ylabel("seconds")
    ax.set_title("Acceptance runtimes (green pass, red fail)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _projector_figure(result: CriterionResult, path: Path) -> None:
    counts = result.detail.get("passing_counts", {})
    total = result.detail.get("scenarios", 0)
    fig, ax = plt.subplots(figsize=(8, 4))
    names = list(counts)
    ax.barh(names, [total] * len(names), color="lightgray", label="scenarios")
    ax.barh(names, [counts[k] for k in names], color="tab:blue", label="check holds")
    ax.set_xlabel("scenarios")
    ax.set_title("Projector checks across mixed scenarios")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _divisibility_figure(result: CriterionResult, path: Path) -> None:
    d = result.detail
    checked = d.get("checked", 0)
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["product roots", "factor-wise roots"]
    fails = [d.get("literal_failures", 0), d.get("factorwise_failures", 0)]
    ax.bar(labels, [checked - f for f in fails], color="tab:green", label="divides")
    ax.bar(labels, fails, bottom=[checked - f for f in fails], color="tab:red",
           label="does not divide")
    ax.set_ylabel("cases")
    ax.set_title("V-spectrum divisibility readings")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_report(results: Sequence[CriterionResult], outdir) -> list[str]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "runtimes.png"]
    _runtime_figure(results, paths[0])
    by_num = {r.number: r for r in results}
    if 7 in by_num:
        paths.append(out / "projector_checks.png")
        _projector_figure(by_num[7], paths[-1])
    if 6 in by_num:
        paths.append(out / "divisibility.png")
        _divisibility_figure(by_num[6], paths[-1])
    (out / "report.txt").write_text(delimited(results) + "\n")
    paths.append(out / "report.txt")
    return [str(p) for p in paths]
