"""Local pixel patterns that weather streaks leave on a camera lens.

Five generators live here: a five-pixel cross (an agglomerate of raindrops),
three two-pixel patch variants, a vertical run of pixels (a dripping line),
a single snow dot, and an eight-pixel hail blob.  All of them are pure: the
same anchor always yields the same pixel list, in the same order (outer x
offset first, then y offset).

Generators do not know about image frames.  They may emit coordinates that
fall outside an image; clipping happens once, at mask-assembly time.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class WeatherKind(enum.Enum):
    RAIN = "rain"
    SNOW = "snow"
    HAIL = "hail"


#: Streak colors as sampled from lens droplets: rain is a cold light gray,
#: snow and hail share a warmer near-white.
WEATHER_COLORS: dict[WeatherKind, tuple[int, int, int]] = {
    WeatherKind.RAIN: (208, 209, 214),
    WeatherKind.SNOW: (249, 242, 242),
    WeatherKind.HAIL: (249, 242, 242),
}

RAIN_COLOR = WEATHER_COLORS[WeatherKind.RAIN]
SNOW_COLOR = WEATHER_COLORS[WeatherKind.SNOW]


class PatternKind(enum.Enum):
    AGGLOMERATE = "agglomerate"
    PATCH_VERTICAL = "patch_vertical"
    PATCH_DIAGONAL = "patch_diagonal"
    PATCH_TWO_DOTS = "patch_two_dots"
    LINE = "line"
    SNOW_DOT = "snow_dot"
    HAIL = "hail"


@dataclass(frozen=True)
class PixelPerturbation:
    """One perturbed pixel: coordinates plus the 8-bit color written there."""

    x: int
    y: int
    r: int
    g: int
    b: int

    def __post_init__(self):
        for channel in (self.r, self.g, self.b):
            if not 0 <= channel <= 255:
                raise ValueError(f"color channel out of range: {channel}")

    @property
    def coord(self) -> tuple[int, int]:
        return (self.x, self.y)

    @property
    def rgb(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class Pattern:
    """A small pixel arrangement anchored at one coordinate."""

    kind: PatternKind
    anchor: tuple[int, int]
    pixels: tuple[PixelPerturbation, ...]

    def coords(self) -> set[tuple[int, int]]:
        return {p.coord for p in self.pixels}


def _pixel(x: int, y: int, rgb: tuple[int, int, int]) -> PixelPerturbation:
    return PixelPerturbation(x, y, *rgb)


def agglomerate_pattern(anchor: tuple[int, int]) -> Pattern:
    """Five rain pixels in a cross over a 3x3 cell.

    The cell positions with even offset sum (0, 2 or 4) are filled, which
    picks out the four corners plus the center.
    """
    x0, y0 = anchor
    pixels = [
        _pixel(x0 + i, y0 + j, RAIN_COLOR)
        for i in range(3)
        for j in range(3)
        if i + j in (0, 2, 4)
    ]
    return Pattern(PatternKind.AGGLOMERATE, anchor, tuple(pixels))


_PATCH_KINDS = {
    0: PatternKind.PATCH_VERTICAL,
    1: PatternKind.PATCH_DIAGONAL,
    2: PatternKind.PATCH_TWO_DOTS,
}


def patch_pattern(anchor: tuple[int, int], t: int) -> Pattern:
    """Two rain pixels: stacked (t=0), anti-diagonal (t=1), or gapped (t=2)."""
    x0, y0 = anchor
    if t == 0:
        pixels = [_pixel(x0, y0 + j, RAIN_COLOR) for j in range(2)]
    elif t == 1:
        pixels = [
            _pixel(x0 + i, y0 + j, RAIN_COLOR)
            for i in range(2)
            for j in range(2)
            if i + j == 1
        ]
    elif t == 2:
        pixels = [_pixel(x0, y0 + 2 * j, RAIN_COLOR) for j in range(2)]
    else:
        raise ValueError(f"patch type must be 0, 1 or 2, got {t!r}")
    return Pattern(_PATCH_KINDS[t], anchor, tuple(pixels))


def line_pattern(anchor: tuple[int, int], n: int) -> Pattern:
    """A vertical run of n rain pixels starting at the anchor."""
    if n < 1:
        raise ValueError(f"line length must be >= 1, got {n!r}")
    x0, y0 = anchor
    pixels = [_pixel(x0, y0 + j, RAIN_COLOR) for j in range(n)]
    return Pattern(PatternKind.LINE, anchor, tuple(pixels))


def snow_pattern(anchor: tuple[int, int]) -> Pattern:
    """A single snow dot at the anchor."""
    x0, y0 = anchor
    return Pattern(PatternKind.SNOW_DOT, anchor, (_pixel(x0, y0, SNOW_COLOR),))


def hail_pattern(anchor: tuple[int, int]) -> Pattern:
    """Eight snow-colored pixels forming a lumpy blob inside a 4x4 cell.

    A 4x4 cell position (i, j) is filled when it sits on the short leading
    diagonal (i = j < 2), on the full anti-diagonal (i + j = 3), or in
    column i = 2 anywhere except j = 2.
    """
    x0, y0 = anchor
    pixels = [
        _pixel(x0 + i, y0 + j, SNOW_COLOR)
        for i in range(4)
        for j in range(4)
        if (i == j and i < 2) or (i + j == 3) or (i == 2 and j != 2)
    ]
    return Pattern(PatternKind.HAIL, anchor, tuple(pixels))
