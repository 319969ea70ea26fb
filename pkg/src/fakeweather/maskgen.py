"""Full-image weather masks assembled from the local patterns.

A mask is generated from the image size alone: no model access, no queries,
no source image.  Rain masks split the frame with a V so droplet crosses
crowd the bottom corners; snow masks cut the frame into three horizontal
bands with the densest dots around the middle; hail masks scatter blobs
uniformly at random.

Row convention: mask row j = 0 is the *bottom* image row.  The flip to
top-left raster order happens exactly once, in `image.apply_mask`.

Every probabilistic step draws from the keyed stream in `randstream`, so a
(dims, config) pair always produces the same mask, byte for byte.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import FormatError
from .patterns import (
    WEATHER_COLORS,
    Pattern,
    PixelPerturbation,
    WeatherKind,
    agglomerate_pattern,
    hail_pattern,
    line_pattern,
    patch_pattern,
    snow_pattern,
)
from .randstream import check_seed, int_draw, unit_draw

#: Hail needs a 4x4 cell to fit at least once.
MIN_DIM = 4

MASK_MAGIC = "fakeweather-mask v1"


@dataclass(frozen=True)
class ImageDims:
    """Frame size in pixels: l columns wide, h rows tall.

    Plain rasters may be as small as 1x1; the 4x4 floor applies to weather
    masks only and is enforced by `check_mask_dims`.
    """

    l: int
    h: int

    def __post_init__(self):
        if self.l < 1 or self.h < 1:
            raise ValueError(f"image dims must be positive, got {self.l}x{self.h}")

    @property
    def area(self) -> int:
        return self.l * self.h

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.l and 0 <= y < self.h


def check_mask_dims(dims: ImageDims) -> ImageDims:
    """Masks need room for the largest pattern cell (4x4, the hail blob)."""
    if dims.l < MIN_DIM or dims.h < MIN_DIM:
        raise ValueError(
            f"mask dims must be at least {MIN_DIM}x{MIN_DIM}, got {dims.l}x{dims.h}"
        )
    return dims


@dataclass(frozen=True)
class AttackConfig:
    """Every tunable of the three mask generators.

    Only the fields relevant to `kind` are consumed, but all of them are
    carried (and serialized) so one config type round-trips through every
    mask file.  Defaults were tuned by eye on 32x32 frames.
    """

    kind: WeatherKind
    seed: int = 0
    p_agglomerate_below_v: float = 0.15
    p_patch_above_v: float = 0.05
    p_line_above_v: float = 0.02
    line_length_range: tuple[int, int] = (2, 5)
    first_line_stride: int = 3
    p_hail: float = 0.04

    def __post_init__(self):
        check_seed(self.seed)
        for name in ("p_agglomerate_below_v", "p_patch_above_v", "p_line_above_v", "p_hail"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p!r}")
            object.__setattr__(self, name, float(p))
        lo, hi = self.line_length_range
        if lo < 1 or hi < lo:
            raise ValueError(
                f"line_length_range must satisfy 1 <= lo <= hi, got {self.line_length_range!r}"
            )
        object.__setattr__(self, "line_length_range", (int(lo), int(hi)))
        if self.first_line_stride < 1:
            raise ValueError(
                f"first_line_stride must be >= 1, got {self.first_line_stride!r}"
            )


@dataclass(frozen=True)
class Mask:
    """A finite set of pixel overwrites plus the config that produced it.

    `pixels` is canonically ordered by (y, x) and free of duplicate
    coordinates; both are enforced at construction.
    """

    kind: WeatherKind
    dims: ImageDims
    pixels: tuple[PixelPerturbation, ...]
    config: AttackConfig

    def __post_init__(self):
        check_mask_dims(self.dims)
        color = WEATHER_COLORS[self.kind]
        seen: set[tuple[int, int]] = set()
        last = None
        for p in self.pixels:
            if not self.dims.contains(p.x, p.y):
                raise ValueError(f"mask pixel {p.coord} outside {self.dims.l}x{self.dims.h}")
            if p.rgb != color:
                raise ValueError(f"mask pixel {p.coord} has color {p.rgb}, expected {color}")
            if p.coord in seen:
                raise ValueError(f"duplicate mask coordinate {p.coord}")
            seen.add(p.coord)
            key = (p.y, p.x)
            if last is not None and key <= last:
                raise ValueError("mask pixels must be sorted ascending by (y, x)")
            last = key

    def coords(self) -> set[tuple[int, int]]:
        return {p.coord for p in self.pixels}


def below_v(dims: ImageDims, i: int, j: int) -> bool:
    """True when column i, bottom-up row j falls under the V divider.

    The V consists of the two half-planes i + j < (h+l)/4 and
    (l-i) + j < (h+l)/4; comparisons are exact (integers scaled by 4),
    never floored.
    """
    if not dims.contains(i, j):
        raise ValueError(f"coordinate ({i}, {j}) outside {dims.l}x{dims.h}")
    rim = dims.h + dims.l
    return 4 * (i + j) < rim or 4 * ((dims.l - i) + j) < rim


class Band(enum.Enum):
    LOWER = "lower"
    MIDDLE = "middle"
    UPPER = "upper"


def snow_band(dims: ImageDims, j: int) -> Band:
    """Which of the three horizontal bands bottom-up row j belongs to.

    Band edges sit at h/3 - 1 and 2h/3 - 1, compared exactly (integers
    scaled by 3).
    """
    if not 0 <= j < dims.h:
        raise ValueError(f"row {j} outside height {dims.h}")
    if 3 * j < dims.h - 3:
        return Band.LOWER
    if 3 * j > 2 * dims.h - 3:
        return Band.UPPER
    return Band.MIDDLE


def _steps(stop: int, step: int) -> list[int]:
    """All multiples of `step` from 0 up to and including `stop`."""
    return list(range(0, stop + 1, step))


@dataclass(frozen=True)
class RainPlan:
    """Placement decisions behind a rain mask, kept for inspection.

    Separating the plan from pixel assembly makes the V geometry directly
    testable: anchors below the V come only from `first_line_anchors` and
    `dense_anchors`; `patch_placements`/`line_placements` hold everything
    above it.
    """

    first_line_anchors: tuple[tuple[int, int], ...]
    dense_anchors: tuple[tuple[int, int], ...]
    patch_placements: tuple[tuple[tuple[int, int], int], ...] = field(default=())
    line_placements: tuple[tuple[tuple[int, int], int], ...] = field(default=())


def _require_kind(config: AttackConfig, kind: WeatherKind) -> None:
    if config.kind is not kind:
        raise ValueError(f"config kind is {config.kind.value!r}, expected {kind.value!r}")


def rain_mask_plan(dims: ImageDims, config: AttackConfig) -> RainPlan:
    """Decide every rain-pattern placement without rendering pixels."""
    _require_kind(config, WeatherKind.RAIN)
    check_mask_dims(dims)
    seed = config.seed
    lo, hi = config.line_length_range

    # A solid row of crosses along the bottom edge, one per stride.
    first_line = [(x, 0) for x in _steps(dims.l - 2, config.first_line_stride)]

    dense: list[tuple[int, int]] = []
    patches: list[tuple[tuple[int, int], int]] = []
    lines: list[tuple[tuple[int, int], int]] = []
    for i in range(dims.l - 2):
        for j in range(dims.h - 2):
            if below_v(dims, i, j):
                if unit_draw(seed, config.kind, "agglomerate", i, j) < config.p_agglomerate_below_v:
                    dense.append((i, j))
            else:
                if unit_draw(seed, config.kind, "patch", i, j) < config.p_patch_above_v:
                    t = int_draw(seed, config.kind, "patch_type", i, j, 3)
                    patches.append(((i, j), t))
                elif unit_draw(seed, config.kind, "line", i, j) < config.p_line_above_v:
                    n = lo + int_draw(seed, config.kind, "line_length", i, j, hi - lo + 1)
                    lines.append(((i, j), n))

    return RainPlan(tuple(first_line), tuple(dense), tuple(patches), tuple(lines))


def gen_rain_mask(dims: ImageDims, config: AttackConfig) -> Mask:
    """Assemble the V-shaped rain mask for the given frame size."""
    plan = rain_mask_plan(dims, config)
    patterns: list[Pattern] = []
    patterns.extend(agglomerate_pattern(a) for a in plan.first_line_anchors)
    patterns.extend(agglomerate_pattern(a) for a in plan.dense_anchors)
    patterns.extend(patch_pattern(a, t) for a, t in plan.patch_placements)
    patterns.extend(line_pattern(a, n) for a, n in plan.line_placements)
    return _assemble(WeatherKind.RAIN, dims, config, patterns)


def gen_snow_mask(dims: ImageDims, config: AttackConfig) -> Mask:
    """Assemble the three-band snow mask.  Fully deterministic: the seed and
    probability fields never influence the result."""
    _require_kind(config, WeatherKind.SNOW)
    check_mask_dims(dims)
    patterns: list[Pattern] = []
    for j in range(0, dims.h - 1, 2):
        if snow_band(dims, j) is Band.MIDDLE or j % 4 == 0:
            xs = _steps(dims.l - 2, 3)
        else:
            # Outer bands thin out every other dotted row.
            xs = _steps(dims.l - 2, 6)
        patterns.extend(snow_pattern((x, j + 1)) for x in xs)
    return _assemble(WeatherKind.SNOW, dims, config, patterns)


def hail_mask_anchors(dims: ImageDims, config: AttackConfig) -> tuple[tuple[int, int], ...]:
    """Anchors whose per-anchor draw clears the inclusion threshold."""
    _require_kind(config, WeatherKind.HAIL)
    check_mask_dims(dims)
    return tuple(
        (i, j)
        for i in range(dims.l - 3)
        for j in range(dims.h - 3)
        if unit_draw(config.seed, config.kind, "hail", i, j) < config.p_hail
    )


def gen_hail_mask(dims: ImageDims, config: AttackConfig) -> Mask:
    """Assemble the sparse hail mask."""
    anchors = hail_mask_anchors(dims, config)
    return _assemble(WeatherKind.HAIL, dims, config, [hail_pattern(a) for a in anchors])


GENERATORS = {
    WeatherKind.RAIN: gen_rain_mask,
    WeatherKind.SNOW: gen_snow_mask,
    WeatherKind.HAIL: gen_hail_mask,
}


def gen_mask(dims: ImageDims, config: AttackConfig) -> Mask:
    """Dispatch to the generator matching `config.kind`."""
    return GENERATORS[config.kind](dims, config)


def _assemble(
    kind: WeatherKind,
    dims: ImageDims,
    config: AttackConfig,
    patterns: list[Pattern],
) -> Mask:
    """Clip candidates to the frame, drop duplicates, order by (y, x)."""
    color = WEATHER_COLORS[kind]
    coords: set[tuple[int, int]] = set()
    for pattern in patterns:
        for p in pattern.pixels:
            if dims.contains(p.x, p.y):
                coords.add(p.coord)
    pixels = tuple(
        PixelPerturbation(x, y, *color) for y, x in sorted((y, x) for x, y in coords)
    )
    return Mask(kind, dims, pixels, config)


def perturbation_budget(mask: Mask) -> float:
    """Fraction of frame pixels the mask overwrites, in [0, 1]."""
    return len(mask.pixels) / mask.dims.area


# --- mask file format ------------------------------------------------------
#
# fakeweather-mask v1
# kind=<rain|snow|hail> l=<int> h=<int> seed=<uint64>
# params=<key=value comma list, canonical order>
# <x> <y> <r> <g> <b>        one line per pixel, ascending (y, x)

_PARAM_KEYS = (
    "p_agglomerate_below_v",
    "p_patch_above_v",
    "p_line_above_v",
    "line_length_min",
    "line_length_max",
    "first_line_stride",
    "p_hail",
)

_HEADER_RE = re.compile(r"^kind=(rain|snow|hail) l=(\d+) h=(\d+) seed=(\d+)$")


def _config_params(config: AttackConfig) -> dict[str, str]:
    lo, hi = config.line_length_range
    return {
        "p_agglomerate_below_v": repr(config.p_agglomerate_below_v),
        "p_patch_above_v": repr(config.p_patch_above_v),
        "p_line_above_v": repr(config.p_line_above_v),
        "line_length_min": str(lo),
        "line_length_max": str(hi),
        "first_line_stride": str(config.first_line_stride),
        "p_hail": repr(config.p_hail),
    }


def write_mask(mask: Mask) -> str:
    """Serialize a mask in the canonical text format."""
    params = _config_params(mask.config)
    lines = [
        MASK_MAGIC,
        f"kind={mask.kind.value} l={mask.dims.l} h={mask.dims.h} seed={mask.config.seed}",
        "params=" + ",".join(f"{k}={params[k]}" for k in _PARAM_KEYS),
    ]
    lines.extend(f"{p.x} {p.y} {p.r} {p.g} {p.b}" for p in mask.pixels)
    return "\n".join(lines) + "\n"


def read_mask(text: str) -> Mask:
    """Parse the canonical text format back into a Mask.

    Rejects anything that would not rewrite byte-identically: wrong magic,
    unknown or missing params, out-of-frame or off-color pixels, duplicate
    coordinates, and pixel lines out of (y, x) order.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise FormatError("mask file must end with a newline")
    if len(lines) < 3:
        raise FormatError("mask file needs a magic, header and params line")
    if lines[0] != MASK_MAGIC:
        raise FormatError(f"bad magic {lines[0]!r}, expected {MASK_MAGIC!r}", line=1)

    m = _HEADER_RE.match(lines[1])
    if m is None:
        raise FormatError(f"malformed header {lines[1]!r}", line=2)
    kind = WeatherKind(m.group(1))
    l, h, seed = int(m.group(2)), int(m.group(3)), int(m.group(4))

    if not lines[2].startswith("params="):
        raise FormatError("expected params line", line=3)
    pairs = lines[2][len("params="):].split(",")
    keys = tuple(p.split("=", 1)[0] for p in pairs)
    if keys != _PARAM_KEYS:
        raise FormatError(f"params must list {','.join(_PARAM_KEYS)} in order", line=3)
    values = {k: p.split("=", 1)[1] for k, p in zip(keys, pairs)}

    try:
        dims = ImageDims(l, h)
        config = AttackConfig(
            kind=kind,
            seed=seed,
            p_agglomerate_below_v=float(values["p_agglomerate_below_v"]),
            p_patch_above_v=float(values["p_patch_above_v"]),
            p_line_above_v=float(values["p_line_above_v"]),
            line_length_range=(
                int(values["line_length_min"]),
                int(values["line_length_max"]),
            ),
            first_line_stride=int(values["first_line_stride"]),
            p_hail=float(values["p_hail"]),
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc

    pixels = []
    for lineno, line in enumerate(lines[3:], start=4):
        parts = line.split(" ")
        if len(parts) != 5:
            raise FormatError(f"expected 5 fields, got {len(parts)}", line=lineno)
        try:
            x, y, r, g, b = (int(p) for p in parts)
            pixels.append(PixelPerturbation(x, y, r, g, b))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from exc

    try:
        return Mask(kind, dims, tuple(pixels), config)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def write_mask_file(mask: Mask, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(write_mask(mask))


def read_mask_file(path) -> Mask:
    with open(path, "r", encoding="ascii", newline="\n") as f:
        return read_mask(f.read())
