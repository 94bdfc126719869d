"""Dynamic image partition planning.

Maps an input image geometry and a tile-count budget to a tile grid: the
image is conceptually resized and padded onto a canvas of ``p_w x p_h``
fixed-size tiles, where ``p_w`` is the smaller of the largest grid width
that fits the budget and the grid width implied by the native resolution
(times a configurable scale factor).  Token accounting for the resulting
grid lives here too, so downstream context assembly can budget sequences
without touching pixels.

Everything in this module is pure integer/rational arithmetic over value
types; no pixels are read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import GeometryError

DEFAULT_TILE_SIZE = 560
DEFAULT_TOKENS_PER_TILE = 400
DEFAULT_MAX_PARTITIONS = 12

# Resizing must keep at least one ViT patch per tile edge.
MIN_TILE_SIZE = 14


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _round_half_up(num: int, den: int) -> int:
    """round(num/den) with exact integer arithmetic, halves rounding up."""
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class TokenBudget:
    """Token accounting for one partitioned image."""

    tokens_per_tile: int
    local_tokens: int
    global_tokens: int
    separator_tokens: int
    total: int


@dataclass(frozen=True)
class PartitionPlan:
    """Solved tiling geometry for one image.

    ``p_w1`` is the largest grid width whose implied grid fits the
    partition budget (``None`` when even a single column cannot fit,
    which forces an aspect-clamped fallback plan).  ``p_w2`` is the grid
    width implied by the native image width at ``scale_factor``.
    """

    input_h: int
    input_w: int
    tile_size: int
    p_w: int
    p_h: int
    p_w1: int | None
    p_w2: int
    scale_factor: float
    aspect_clamped: bool

    @property
    def canvas_w(self) -> int:
        return self.p_w * self.tile_size

    @property
    def canvas_h(self) -> int:
        return self.p_h * self.tile_size

    @property
    def num_tiles(self) -> int:
        return self.p_w * self.p_h

    def to_dict(self, budget: TokenBudget | None = None) -> dict:
        """JSON-shaped view of the plan; field names are a wire contract."""
        out = {
            "input_h": self.input_h,
            "input_w": self.input_w,
            "tile_size": self.tile_size,
            "p_w": self.p_w,
            "p_h": self.p_h,
            "canvas_w": self.canvas_w,
            "canvas_h": self.canvas_h,
            "aspect_clamped": self.aspect_clamped,
        }
        if budget is not None:
            out["token_budget"] = {
                "tokens_per_tile": budget.tokens_per_tile,
                "local_tokens": budget.local_tokens,
                "global_tokens": budget.global_tokens,
                "separator_tokens": budget.separator_tokens,
                "total": budget.total,
            }
        return out


class PlacementRect(NamedTuple):
    """Where the resized image content lands on the canvas."""

    scaled_w: int
    scaled_h: int
    offset_x: int
    offset_y: int


def _check_dims(h: int, w: int) -> None:
    if h < 1 or w < 1:
        raise GeometryError(f"image dimensions must be >= 1, got {w}x{h}")


def max_width_partitions(h: int, w: int, max_partitions: int) -> int | None:
    """Largest grid width ``p`` with ``p * ceil(p*h/w) <= max_partitions``.

    Returns ``None`` when even ``p = 1`` overflows the budget (extremely
    tall inputs).  The cost ``p * ceil(p*h/w)`` is nondecreasing in ``p``,
    so binary search over ``[1, max_partitions]`` is exact.
    """
    _check_dims(h, w)
    if max_partitions < 1:
        raise GeometryError(f"max_partitions must be >= 1, got {max_partitions}")

    def cost(p: int) -> int:
        return p * _ceil_div(p * h, w)

    if cost(1) > max_partitions:
        return None
    lo, hi = 1, max_partitions  # cost(p) >= p, so no feasible p beyond the budget
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cost(mid) <= max_partitions:
            lo = mid
        else:
            hi = mid - 1
    return lo


def plan_partition(
    h: int,
    w: int,
    max_partitions: int = DEFAULT_MAX_PARTITIONS,
    scale_factor: float = 1.0,
    tile_size: int = DEFAULT_TILE_SIZE,
) -> PartitionPlan:
    """Solve the tile grid for an ``h x w`` image under a tile-count budget.

    When no grid fits (aspect ratio steeper than the budget allows), the
    plan falls back to a single column of ``max_partitions`` tiles and is
    flagged ``aspect_clamped`` instead of raising, so batch pipelines
    never abort on one pathological image.
    """
    _check_dims(h, w)
    if max_partitions < 1:
        raise GeometryError(f"max_partitions must be >= 1, got {max_partitions}")
    if not scale_factor > 0:
        raise GeometryError(f"scale_factor must be > 0, got {scale_factor}")
    if tile_size < MIN_TILE_SIZE:
        raise GeometryError(f"tile_size must be >= {MIN_TILE_SIZE}, got {tile_size}")

    # Exact rational ceil: float rounding must not flip a boundary case.
    p_w2 = max(1, math.ceil(Fraction(w) * Fraction(scale_factor) / tile_size))
    p_w1 = max_width_partitions(h, w, max_partitions)

    if p_w1 is None:
        return PartitionPlan(
            input_h=h,
            input_w=w,
            tile_size=tile_size,
            p_w=1,
            p_h=max_partitions,
            p_w1=None,
            p_w2=p_w2,
            scale_factor=scale_factor,
            aspect_clamped=True,
        )

    p_w = max(1, min(p_w1, p_w2))
    p_h = _ceil_div(p_w * h, w)
    return PartitionPlan(
        input_h=h,
        input_w=w,
        tile_size=tile_size,
        p_w=p_w,
        p_h=p_h,
        p_w1=p_w1,
        p_w2=p_w2,
        scale_factor=scale_factor,
        aspect_clamped=False,
    )


def token_budget(
    plan: PartitionPlan,
    tokens_per_tile: int = DEFAULT_TOKENS_PER_TILE,
    include_global: bool = True,
    row_separator_tokens: int = 1,
    tail_separator_tokens: int = 1,
    global_separator_tokens: int = 1,
) -> TokenBudget:
    """Token accounting for a plan under the default separator scheme.

    Separators: one per local tile row, one trailing the image block, and
    one after the global view when it is included.  All three are knobs;
    the defaults give ``total = tokens_per_tile * (p_w*p_h + 1) + p_h + 2``
    for a plan with a global view.
    """
    if tokens_per_tile < 1:
        raise ValueError(f"tokens_per_tile must be >= 1, got {tokens_per_tile}")
    local = tokens_per_tile * plan.num_tiles
    global_tokens = tokens_per_tile if include_global else 0
    separators = plan.p_h * row_separator_tokens + tail_separator_tokens
    if include_global:
        separators += global_separator_tokens
    return TokenBudget(
        tokens_per_tile=tokens_per_tile,
        local_tokens=local,
        global_tokens=global_tokens,
        separator_tokens=separators,
        total=local + global_tokens + separators,
    )


def resize_pad_geometry(h: int, w: int, plan: PartitionPlan) -> PlacementRect:
    """Placement of the resized image on the plan's canvas.

    Width-fit whenever the scaled height stays inside the canvas, which
    covers every non-clamped plan (``p_h = ceil(p_w*h/w)`` guarantees it);
    aspect-clamped plans of very tall images height-fit instead so the
    content never overflows.  Content sits at the origin and padding
    occupies only the trailing band.
    """
    _check_dims(h, w)
    if (h, w) != (plan.input_h, plan.input_w):
        raise GeometryError(
            f"plan was computed for {plan.input_w}x{plan.input_h}, got {w}x{h}"
        )
    cw, ch = plan.canvas_w, plan.canvas_h
    if h * cw <= ch * w:  # canvas_w/w <= canvas_h/h: width-fit
        return PlacementRect(cw, _round_half_up(h * cw, w), 0, 0)
    return PlacementRect(_round_half_up(w * ch, h), ch, 0, 0)
