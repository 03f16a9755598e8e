"""Report rendering: delimited text tables and rate-region figures."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .region import BoundSet, CharFieldResult, RegionReport


def region_table(report: RegionReport) -> str:
    """Tab-delimited table of the maximal achieved points."""
    q = report.field.q
    lines = ["u\talpha\twitness_size"]
    for a in report.achieved:
        alphas = [f"{x:.6f}" for x in a.rate_point(report.m).alphas(q)]
        lines.append(
            f"{','.join(map(str, a.u))}\t{','.join(alphas)}\t"
            f"{sum(len(p) for p in a.witness.parts)}"
        )
    lines.append("")
    lines.append("I\tj\trhs")
    for iq in report.bound.inequalities:
        lines.append(f"{{{','.join(map(str, iq.I))}}}\t{iq.j}\t{iq.rhs}")
    return "\n".join(lines) + "\n"


def bound_table(bound: BoundSet) -> str:
    lines = ["I\tj\trhs"]
    for iq in bound.inequalities:
        lines.append(f"{{{','.join(map(str, iq.I))}}}\t{iq.j}\t{iq.rhs}")
    return "\n".join(lines) + "\n"


def charsep_table(results: Sequence[CharFieldResult]) -> str:
    lines = ["q\tm\tclass\trate_11_achieved\tmax_2a1_plus_a2"]
    for r in results:
        mx = "-" if r.max_weighted is None else str(r.max_weighted)
        lines.append(
            f"{r.q}\t{r.m}\t{r.code_class}\t{'yes' if r.achieves_one_one else 'no'}\t{mx}"
        )
    return "\n".join(lines) + "\n"


def plot_region(report: RegionReport, path: str) -> None:
    """Scatter the achieved rate points and draw the outer-bound facets.
    Only 2-pair channels are plotted."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if len(report.achieved) and len(report.achieved[0].u) != 2:
        raise ValueError("region plots are only drawn for 2-pair channels")
    q = report.field.q
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = [a.rate_point(report.m).alphas(q) for a in report.achieved]
    if pts:
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], zorder=3, label="achieved (maximal)")
    lim = 0.5 + max(
        [iq.rhs for iq in report.bound.inequalities] + [p[i] for p in pts for i in (0, 1)] + [1]
    )
    for iq in report.bound.inequalities:
        if iq.I == (1,):
            ax.axvline(iq.rhs, color="tab:red", lw=1, ls="--")
        elif iq.I == (2,):
            ax.axhline(iq.rhs, color="tab:red", lw=1, ls="--")
        elif iq.I == (1, 2):
            ax.plot([0, iq.rhs], [iq.rhs, 0], color="tab:red", lw=1, ls="--")
    ax.set_xlim(0, lim)
    ax.set_ylim(0, lim)
    ax.set_xlabel("alpha_1")
    ax.set_ylabel("alpha_2")
    ax.set_title(f"m={report.m}, class={report.code_class}, q={q}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_charsep(results: Sequence[CharFieldResult], path: str) -> None:
    """Max of 2*alpha_1 + alpha_2 per (q, m), grouped by field order."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    by_q: dict[int, list[CharFieldResult]] = {}
    for r in results:
        by_q.setdefault(r.q, []).append(r)
    for q, rs in sorted(by_q.items()):
        ms = [r.m for r in rs]
        vals = [float(r.max_weighted or Fraction(0)) for r in rs]
        ax.plot(ms, vals, marker="o", label=f"q={q}")
    ax.axhline(2.0, color="gray", lw=1, ls=":")
    ax.set_xlabel("shots m")
    ax.set_ylabel("max 2*alpha_1 + alpha_2")
    ax.set_title("characteristic separation on the benchmark channel")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
