"""Terminal summaries (Rich) for command results and errors.

Documents themselves go to files or stdout through core.formats; this
module only prints the human-readable recap shown when --out is given.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from core import CommandOutcome, DecayClass, ExperimentConfig, RieszNormRow, SeamlineError, SweepRow


def render_summary(
    console: Console,
    config: ExperimentConfig,
    outcome: CommandOutcome,
) -> None:
    """Header, key/value summary, optional table, and where the output went."""
    console.print()
    console.print(
        f"[bold]Seamline[/bold] — {config.command.value}",
        style="bright_white",
    )
    console.print("━" * 50, style="dim")

    if outcome.summary:
        table = Table(show_header=False, box=None, padding=(0, 2, 0, 2))
        table.add_column("Field", style="dim")
        table.add_column("Value")
        for label, value in outcome.summary:
            table.add_row(label, value)
        console.print(table)

    if outcome.rows:
        console.print()
        table = Table(show_header=True, box=None, padding=(0, 2))
        for i, column in enumerate(outcome.columns):
            table.add_column(column, justify="left" if i == 0 else "right")
        for row in outcome.rows:
            table.add_row(*row)
        console.print(table)

    console.print()
    if config.output_path is not None:
        console.print(f"  [dim]Wrote[/dim] {_short_path(config.output_path)}")
    if outcome.error is not None:
        console.print(f"  [yellow]⚠ {escape(str(outcome.error))}[/yellow]")
        console.print(f"  [yellow]⚠ Finished with exit status {outcome.exit_code}[/yellow]")
    console.print()


def render_error(console: Console, command: str, error: SeamlineError) -> None:
    console.print(
        f"[bold red]Error:[/bold red] {command}: {type(error).__name__}: {escape(str(error))} "
        f"[dim](exit status {error.exit_code})[/dim]"
    )


def riesz_rows(rows: list[RieszNormRow]) -> list[list[str]]:
    return [
        [
            str(row.degree),
            f"{row.estimated_norm:.6f}",
            "kernel" if row.witness_seed < 0 else f"trial {row.witness_seed}",
        ]
        for row in rows
    ]


def sweep_rows(rows: list[SweepRow]) -> list[list[str]]:
    out = []
    for row in rows:
        if row.report is None:
            out.append([row.file_name, "[red]error[/red]", "—", "—"])
            continue
        report = row.report
        out.append([
            row.file_name,
            _decay_style(report.decay_class),
            "—" if report.estimated_exponent is None else f"{report.estimated_exponent:.3f}",
            "—" if report.fit_quality is None else f"{report.fit_quality:.4f}",
        ])
    return out


# ── Helpers ───────────────────────────────────────────────────────────────────


def _decay_style(decay: DecayClass) -> str:
    color = {
        DecayClass.TRIG_POLYNOMIAL: "green",
        DecayClass.SUPER_POLYNOMIAL: "green",
        DecayClass.POWER_LAW: "yellow",
        DecayClass.SLOW: "red",
    }[decay]
    return f"[{color}]{decay.label}[/{color}]"


def _short_path(path: Optional[Path]) -> str:
    text = str(path)
    if len(text) > 60:
        text = "..." + text[-57:]
    return text
