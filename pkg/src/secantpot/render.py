"""Basin and potential images over complex slices of C^2.

Hue encodes the root an orbit converges to, brightness encodes the potential h
(through a 0.8 gamma), black pixels mark equipotential crossings and white
pixels did not converge.
"""

from __future__ import annotations

import colorsys
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Tuple

import numpy as np

from .bottcher import exp_below_one, make_context
from .cplx import format_complex, parse_complex
from .dynamics import BUDGET, PlanePoint
from .errors import NotCubic
from .kernels import run_orbits
from .mero import certify_root, find_roots, parse_function

SLICE_KINDS = ("Diagonal", "CriticalCubic", "ComplexLine", "RealPlane")
DEFAULT_LEVELS = tuple(round(0.1 * k, 1) for k in range(1, 10))
GAMMA = 0.8


@dataclass(frozen=True)
class SliceSpec:
    kind: str
    window: Tuple[float, float, float, float]
    base: Optional[PlanePoint] = None
    direction: Optional[PlanePoint] = None

    def __post_init__(self):
        if self.kind not in SLICE_KINDS:
            raise ValueError(f"unknown slice kind {self.kind!r}")
        w = tuple(float(v) for v in self.window)
        if len(w) != 4 or not (w[0] < w[1] and w[2] < w[3]):
            raise ValueError(f"degenerate window {self.window}")
        object.__setattr__(self, "window", w)
        if self.kind == "ComplexLine" and (self.base is None or self.direction is None):
            raise ValueError("ComplexLine needs base and direction")


def cubic_root_sum(f):
    """Sum of the three roots of a cubic polynomial, from its coefficients."""
    if not f.is_polynomial or len(f.num) != 4:
        raise NotCubic(f"{f.text!r} is not a cubic polynomial")
    return complex(-f.num[2] / f.num[3])


def slice_points(spec, u, f=None):
    """Vectorized :func:`slice_point`; returns arrays ``(x, y)``."""
    u = np.asarray(u, dtype=complex)
    if spec.kind == "Diagonal":
        return u, u.copy()
    if spec.kind == "CriticalCubic":
        if f is None:
            raise NotCubic("critical-line slice needs the function")
        s = cubic_root_sum(f)
        return s - 2.0 * u, u.copy()
    if spec.kind == "ComplexLine":
        return spec.base.x + u * spec.direction.x, spec.base.y + u * spec.direction.y
    return u.real.astype(complex), u.imag.astype(complex)


def slice_point(spec, u, f=None):
    """Map a slice parameter to a point of C^2.

    For RealPlane the parameter is ``u1 + i u2`` (or a real pair) and the
    result is the real point ``(u1, u2)``.
    """
    if isinstance(u, (tuple, list)):
        u = complex(u[0], u[1])
    x, y = slice_points(spec, np.array([complex(u)]), f)
    return PlanePoint(complex(x[0]), complex(y[0]))


@dataclass(frozen=True)
class RenderConfig:
    function: str
    slice: SliceSpec
    resolution: Tuple[int, int] = (400, 400)
    budget: int = BUDGET
    contour_levels: Tuple[float, ...] = DEFAULT_LEVELS
    palette: Optional[Tuple[float, ...]] = None
    out_path: str = "render.ppm"
    format: str = "PPM"
    roots: Optional[Tuple[complex, ...]] = None

    def __post_init__(self):
        w, h = (int(v) for v in self.resolution)
        if w < 1 or h < 1:
            raise ValueError("resolution must be at least 1x1")
        object.__setattr__(self, "resolution", (w, h))
        levels = tuple(float(c) for c in self.contour_levels)
        if any(not 0.0 < c < 1.0 for c in levels):
            raise ValueError("contour levels must lie in (0, 1)")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("contour levels must be strictly increasing")
        object.__setattr__(self, "contour_levels", levels)
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.format not in ("PPM", "PNG"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.palette is not None:
            object.__setattr__(self, "palette", tuple(float(v) for v in self.palette))
        if self.roots is not None:
            object.__setattr__(self, "roots", tuple(complex(v) for v in self.roots))

    @classmethod
    def from_dict(cls, data):
        import jsonschema

        jsonschema.validate(data, load_schema())
        sl = data["slice"]
        pair = lambda v: PlanePoint(parse_complex(v[0]), parse_complex(v[1])) if v else None  # noqa: E731
        spec = SliceSpec(sl["kind"], tuple(sl["window"]), pair(sl.get("base")), pair(sl.get("direction")))
        kwargs = {k: data[k] for k in ("budget", "out_path", "format") if k in data}
        if "contour_levels" in data:
            kwargs["contour_levels"] = tuple(data["contour_levels"])
        if "palette" in data:
            kwargs["palette"] = tuple(data["palette"])
        if "roots" in data:
            kwargs["roots"] = tuple(parse_complex(s) for s in data["roots"])
        return cls(data["function"], spec, tuple(data["resolution"]), **kwargs)

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        sl = {"kind": self.slice.kind, "window": list(self.slice.window)}
        if self.slice.base is not None:
            sl["base"] = [format_complex(self.slice.base.x), format_complex(self.slice.base.y)]
        if self.slice.direction is not None:
            sl["direction"] = [format_complex(self.slice.direction.x), format_complex(self.slice.direction.y)]
        out = {
            "function": self.function,
            "slice": sl,
            "resolution": list(self.resolution),
            "budget": self.budget,
            "contour_levels": list(self.contour_levels),
            "out_path": self.out_path,
            "format": self.format,
        }
        if self.palette is not None:
            out["palette"] = list(self.palette)
        if self.roots is not None:
            out["roots"] = [format_complex(z) for z in self.roots]
        return out


def load_schema():
    text = resources.files("secantpot").joinpath("render_config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class FieldGrid:
    """Per-pixel results; row 0 is the top of the image.

    ``basin`` is the root index, -1 for no convergence, -2 for an
    indeterminate step. ``h`` is NaN where undefined.
    """

    basin: np.ndarray
    h: np.ndarray
    steps: np.ndarray
    logh: np.ndarray = field(repr=False)
    roots: tuple = field(repr=False, default=())

    @property
    def shape(self):
        return self.basin.shape


def pixel_parameters(config):
    """Slice parameters at pixel centres, shaped (height, width)."""
    w, h = config.resolution
    re0, re1, im0, im1 = config.slice.window
    re = re0 + (np.arange(w) + 0.5) * ((re1 - re0) / w)
    im = im1 - (np.arange(h) + 0.5) * ((im1 - im0) / h)
    return re[None, :] + 1j * im[:, None]


def resolve_roots(f, config):
    if config.roots is not None:
        return [certify_root(f, z) for z in config.roots]
    return find_roots(f)


def compute_field(f, roots, config, workers=None, backend=None):
    """Classify every pixel and attach the potential of its root."""
    for r in roots:
        if not r.exceptional:
            make_context(f, r)
    u = pixel_parameters(config)
    x, y = slice_points(config.slice, u, f)
    basin, steps, logh = run_orbits(f, roots, x, y, config.budget, workers=workers, backend=backend)
    shape = u.shape
    basin = basin.reshape(shape)
    logh = logh.reshape(shape)
    with np.errstate(invalid="ignore"):
        h = np.where(basin >= 0, exp_below_one(logh), np.nan)
    return FieldGrid(basin, h, steps.reshape(shape), logh, tuple(roots))


def default_palette(nroots):
    return tuple(((k / max(nroots, 1)) + 1.0 / 6.0) % 1.0 for k in range(nroots))


def contour_mask(basin, h, levels):
    """Pixels whose right or lower neighbour lies across a level in the same basin."""
    mask = np.zeros(basin.shape, dtype=bool)
    levels = np.asarray(levels, dtype=float)
    if levels.size == 0:
        return mask
    for axis in (1, 0):
        a = [slice(None), slice(None)]
        b = [slice(None), slice(None)]
        a[axis] = slice(None, -1)
        b[axis] = slice(1, None)
        a, b = tuple(a), tuple(b)
        same = (basin[a] == basin[b]) & (basin[a] >= 0)
        h1 = h[a][..., None]
        h2 = h[b][..., None]
        with np.errstate(invalid="ignore"):
            cross = np.any((h1 - levels) * (h2 - levels) < 0, axis=-1)
        mask[a] |= same & cross
    return mask


def colorize(grid, config):
    """RGB image (uint8, height x width x 3) for a computed grid."""
    basin, h = grid.basin, grid.h
    n = max(int(basin.max()) + 1, len(grid.roots), 1)
    palette = config.palette if config.palette is not None else default_palette(n)
    if len(palette) < n:
        raise ValueError(f"palette has {len(palette)} hues for {n} roots")
    base = np.array([colorsys.hsv_to_rgb(hue, 1.0, 1.0) for hue in palette[:n]], dtype=float)
    rgb = np.ones(basin.shape + (3,), dtype=float)
    ok = basin >= 0
    value = np.where(np.isnan(h), 1.0, np.power(np.where(np.isnan(h), 1.0, h), GAMMA))
    rgb[ok] = base[basin[ok]] * value[ok][:, None]
    rgb[contour_mask(basin, h, config.contour_levels)] = 0.0
    return np.floor(rgb * 255.0 + 0.5).clip(0, 255).astype(np.uint8)


def ppm_bytes(rgb):
    height, width = rgb.shape[:2]
    return f"P6\n{width} {height}\n255\n".encode("ascii") + np.ascontiguousarray(rgb, dtype=np.uint8).tobytes()


def draw(grid, config, path=None):
    """Write the image for ``grid``; returns the output path."""
    path = config.out_path if path is None else path
    rgb = colorize(grid, config)
    if config.format == "PNG":
        from PIL import Image

        Image.fromarray(rgb, "RGB").save(path, format="PNG")
    else:
        with open(path, "wb") as fh:
            fh.write(ppm_bytes(rgb))
    return path


def render(config, workers=None, backend=None):
    """Parse, compute and draw in one call; returns the grid."""
    f = parse_function(config.function)
    roots = resolve_roots(f, config)
    grid = compute_field(f, roots, config, workers=workers, backend=backend)
    draw(grid, config)
    return grid


__all__ = [
    "SliceSpec",
    "RenderConfig",
    "FieldGrid",
    "slice_point",
    "slice_points",
    "compute_field",
    "draw",
    "render",
    "colorize",
    "contour_mask",
    "ppm_bytes",
    "cubic_root_sum",
    "pixel_parameters",
    "resolve_roots",
    "default_palette",
    "load_schema",
]
