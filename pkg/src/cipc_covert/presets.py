"""Built-in parameter sets for the five numerical figures.

Caption values are used where given.  Choices the captions leave open are
listed in each preset's ``notes`` so they travel with the output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import Settings, SweepSpec


@dataclass(frozen=True)
class Series:
    label: str
    settings: Settings
    optimize_rate: bool = False


@dataclass(frozen=True)
class FigurePreset:
    name: str
    kind: str  # "detection" or "ect"
    sweep: SweepSpec
    series: tuple[Series, ...]
    g_bw: float = 1.0
    notes: tuple[str, ...] = field(default_factory=tuple)


_DETECTION_BASE = Settings(q=1.0, p_b_max_db=0.0, sigma2_w_db=0.0)
_TAU_GRID = SweepSpec("tau", 0.0, 5.0, 201, "linear")


def _fig3() -> FigurePreset:
    return FigurePreset(
        name="fig3",
        kind="detection",
        sweep=_TAU_GRID,
        series=(Series("conventional", _DETECTION_BASE.with_value("scheme", "conventional")),),
        notes=("tau grid 0..5 in 201 steps",),
    )


def _fig4() -> FigurePreset:
    s = _DETECTION_BASE.with_value("scheme", "truncated").with_value("p_a_max_db", 0.0)
    return FigurePreset(
        name="fig4",
        kind="detection",
        sweep=_TAU_GRID,
        series=(Series("truncated", s),),
        notes=("tau grid 0..5 in 201 steps",),
    )


def _fig5() -> FigurePreset:
    base = Settings(scheme="conventional", epsilon=0.1, sigma2_b_db=0.0, rate=1.0)
    return FigurePreset(
        name="fig5",
        kind="ect",
        sweep=SweepSpec("p_b_max_db", 0.0, 60.0, 13, "linear"),
        series=tuple(Series(f"conventional phi={phi:g}", base.with_value("phi", phi))
                     for phi in (0.1, 0.5, 1.0)),
        notes=("rate fixed at R=1", "p_b_max swept 0..60 dB"),
    )


def _fig6() -> FigurePreset:
    base = Settings(phi=0.1, epsilon=0.01, p_a_max_db=10.0, sigma2_b_db=0.0)
    return FigurePreset(
        name="fig6",
        kind="ect",
        sweep=SweepSpec("p_b_max_db", 0.0, 40.0, 17, "linear"),
        series=(
            Series("truncated", base.with_value("scheme", "truncated"), optimize_rate=True),
            Series("conventional", base.with_value("scheme", "conventional"), optimize_rate=True),
        ),
        notes=("q and rate optimized", "p_b_max swept 0..40 dB"),
    )


def _fig7() -> FigurePreset:
    base = Settings(p_b_max_db=20.0, sigma2_b_db=-10.0, phi=0.1, p_a_max_db=0.0)
    series = []
    for eps in (0.01, 0.05, 0.1):
        s = base.with_value("epsilon", eps)
        series.append(Series(f"truncated eps={eps:g}", s.with_value("scheme", "truncated"), True))
        series.append(Series(f"conventional eps={eps:g}", s.with_value("scheme", "conventional"), True))
    return FigurePreset(
        name="fig7",
        kind="ect",
        sweep=SweepSpec("p_a_max_db", 0.0, 40.0, 9, "linear"),
        series=tuple(series),
        notes=("q and rate optimized", "epsilon in {0.01, 0.05, 0.1}", "p_a_max swept 0..40 dB"),
    )


PRESETS = {f.__name__.lstrip("_"): f for f in (_fig3, _fig4, _fig5, _fig6, _fig7)}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown figure {name!r}; choose from {sorted(PRESETS)}") from None
