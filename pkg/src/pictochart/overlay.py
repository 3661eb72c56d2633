"""Pictorial overlay data: design patterns, placements, assets.

Pure value types; the application logic lives in :mod:`pictochart.patterns`.
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, field

import numpy as np

PATTERN_KINDS = ("semantic", "unit", "height", "area")
FILL_STYLES = ("color-fill", "clip")


@dataclass(frozen=True)
class DesignPattern:
    """One of the four ways a pictorial object encodes a mark's value."""

    kind: str
    unit_value: float | None = None
    fill_style: str | None = None

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "unit" and not (self.unit_value and self.unit_value > 0):
            raise ValueError("unit pattern requires unit_value > 0")
        if self.fill_style is not None and self.fill_style not in FILL_STYLES:
            raise ValueError(f"unknown fill style {self.fill_style!r}")

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.unit_value is not None:
            out["unit_value"] = self.unit_value
        if self.fill_style is not None:
            out["fill_style"] = self.fill_style
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DesignPattern":
        return cls(data["kind"], data.get("unit_value"), data.get("fill_style"))


@dataclass(frozen=True)
class PictorialAsset:
    """An RGBA image with provenance; pixel data kept as immutable bytes."""

    width: int
    height: int
    rgba: bytes
    provenance: str  # stub | remote | upload
    description: str = ""

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("asset must have positive size")
        if len(self.rgba) != self.width * self.height * 4:
            raise ValueError("rgba byte length does not match size")

    @property
    def array(self) -> np.ndarray:
        arr = np.frombuffer(self.rgba, dtype=np.uint8).reshape(self.height, self.width, 4)
        arr.setflags(write=False)
        return arr

    @property
    def natural_size(self) -> tuple[int, int]:
        return (self.width, self.height)

    def content_id(self) -> str:
        digest = hashlib.blake2b(self.rgba, digest_size=8)
        digest.update(self.description.encode())
        return "a" + digest.hexdigest()

    @classmethod
    def from_array(cls, arr: np.ndarray, provenance: str, description: str = "") -> "PictorialAsset":
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError("asset image must be RGBA")
        return cls(arr.shape[1], arr.shape[0], arr.tobytes(), provenance, description)

    def to_json(self) -> dict:
        return {
            "w": self.width,
            "h": self.height,
            "rgba_b64": base64.b64encode(self.rgba).decode("ascii"),
            "provenance": self.provenance,
            "description": self.description,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PictorialAsset":
        return cls(data["w"], data["h"], base64.b64decode(data["rgba_b64"]),
                   data["provenance"], data.get("description", ""))


@dataclass(frozen=True)
class Placement:
    """One positioned copy of an asset: destination rect plus clip fraction."""

    asset_id: str
    rect: tuple[int, int, int, int]
    clip_fraction: float = 1.0

    def to_json(self) -> dict:
        return {"asset": self.asset_id, "rect": list(self.rect), "clip": self.clip_fraction}

    @classmethod
    def from_json(cls, data: dict) -> "Placement":
        return cls(data["asset"], tuple(data["rect"]), data.get("clip", 1.0))


@dataclass(frozen=True)
class PictorialOverlay:
    """Result of applying a pattern (or background/tick replacement) to a node."""

    role: str  # mark | background | tick
    placements: tuple[Placement, ...]
    pattern: DesignPattern | None = None
    source_asset: str | None = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.role not in ("mark", "background", "tick"):
            raise ValueError(f"unknown overlay role {self.role!r}")
        if not self.placements:
            raise ValueError("overlay needs at least one placement")

    def to_json(self) -> dict:
        out: dict = {"role": self.role, "placements": [p.to_json() for p in self.placements]}
        if self.pattern is not None:
            out["pattern"] = self.pattern.to_json()
        if self.source_asset is not None:
            out["source_asset"] = self.source_asset
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PictorialOverlay":
        return cls(
            role=data["role"],
            placements=tuple(Placement.from_json(p) for p in data["placements"]),
            pattern=DesignPattern.from_json(data["pattern"]) if data.get("pattern") else None,
            source_asset=data.get("source_asset"),
            warnings=tuple(data.get("warnings", ())),
        )
