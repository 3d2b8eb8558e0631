"""Dominant-color classification of keyframe rasters.

Each pixel is assigned to one of eleven bins via its HSV representation
(H in [0,360), S and V in [0,1]):

* V < 0.15                -> BLACK
* S < 0.20 and V >= 0.85  -> WHITE
* S < 0.20                -> GRAY
* otherwise by hue: RED [345,360)+[0,15), ORANGE [15,45), YELLOW [45,70),
  GREEN [70,170), CYAN [170,200), BLUE [200,260), PURPLE [260,290),
  MAGENTA [290,345)

The profile's dominant bin is the largest-fraction bin if it covers at
least a quarter of the pixels, NONE otherwise; ties resolve in bin order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyRaster

# Bin order doubles as the tie-break order for the dominant bin.
COLOR_BINS = (
    "RED",
    "ORANGE",
    "YELLOW",
    "GREEN",
    "CYAN",
    "BLUE",
    "PURPLE",
    "MAGENTA",
    "BLACK",
    "WHITE",
    "GRAY",
)
NO_COLOR = "NONE"

# Fraction of pixels the top bin must reach to count as dominant.
DOMINANCE_FLOOR = 0.25

_HUE_EDGES = (15, 45, 70, 170, 200, 260, 290, 345)
# searchsorted slot -> bin; hue >= 345 wraps back to RED
_HUE_BINS = ("RED", "ORANGE", "YELLOW", "GREEN", "CYAN", "BLUE", "PURPLE", "MAGENTA", "RED")


@dataclass(frozen=True)
class ColorProfile:
    dominant: str
    bin_fractions: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"dominant": self.dominant, "bin_fractions": dict(self.bin_fractions)}

    @classmethod
    def from_dict(cls, d: dict) -> "ColorProfile":
        return cls(dominant=d["dominant"], bin_fractions=dict(d["bin_fractions"]))


def classify_dominant_color(pixels) -> ColorProfile:
    """Classify an RGB raster into a ColorProfile.

    ``pixels`` is anything coercible to a (..., 3) uint8 array, typically
    an (H, W, 3) image or an (N, 3) pixel list. Only the multiset of pixel
    values matters.

    All threshold comparisons are done in integer arithmetic (cross
    multiplication against the rational HSV thresholds), so pixels landing
    exactly on a bin edge classify exactly, with no float rounding.
    """
    arr = np.asarray(pixels)
    if arr.size == 0:
        raise EmptyRaster("raster has no pixels")
    if arr.shape[-1] != 3:
        raise ValueError(f"expected RGB pixels with a trailing axis of 3, got shape {arr.shape}")
    flat = arr.reshape(-1, 3).astype(np.int64)

    r, g, b = flat[:, 0], flat[:, 1], flat[:, 2]
    mx = np.maximum(np.maximum(r, g), b)
    mn = np.minimum(np.minimum(r, g), b)
    d = mx - mn

    # V < 0.15  <=>  mx/255 < 3/20  <=>  20*mx < 765
    black = 20 * mx < 765
    # S < 0.20  <=>  d/mx < 1/5  <=>  5*d < mx   (mx > 0 whenever not black)
    achromatic = ~black & (5 * d < mx)
    # V >= 0.85  <=>  20*mx >= 4335
    white = achromatic & (20 * mx >= 4335)
    gray = achromatic & ~white
    chromatic = ~black & ~achromatic

    counts = dict.fromkeys(COLOR_BINS, 0)
    counts["BLACK"] = int(np.count_nonzero(black))
    counts["WHITE"] = int(np.count_nonzero(white))
    counts["GRAY"] = int(np.count_nonzero(gray))

    if np.any(chromatic):
        rc, gc, bc = r[chromatic], g[chromatic], b[chromatic]
        mxc, dc = mx[chromatic], d[chromatic]
        # Hue scaled by the chroma denominator: hue_d = H * d, an exact integer.
        # Max channel breaks ties in R, G, B order.
        is_r = mxc == rc
        is_g = ~is_r & (mxc == gc)
        hue_d = np.where(
            is_r,
            60 * (gc - bc) + np.where(gc < bc, 360 * dc, 0),
            np.where(is_g, 60 * (bc - rc) + 120 * dc, 60 * (rc - gc) + 240 * dc),
        )
        # H >= edge  <=>  hue_d >= edge * d
        slot = np.zeros(len(hue_d), dtype=np.int64)
        for edge in _HUE_EDGES:
            slot += hue_d >= edge * dc
        for i, name in enumerate(_HUE_BINS):
            n = int(np.count_nonzero(slot == i))
            if n:
                counts[name] += n

    total = len(flat)
    best_bin, best_count = NO_COLOR, 0
    for name in COLOR_BINS:
        if counts[name] > best_count:
            best_bin, best_count = name, counts[name]
    # fraction >= 0.25  <=>  4*count >= total, kept exact in integers
    dominant = best_bin if 4 * best_count >= total else NO_COLOR
    fractions = {name: counts[name] / total for name in COLOR_BINS if counts[name]}
    return ColorProfile(dominant=dominant, bin_fractions=fractions)
