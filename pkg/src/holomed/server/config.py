"""Server configuration: TOML key/value file plus environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib  # py>=3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from holomed.depth_gesture.types import GateConfig
from holomed.errors import ConfigError, InputError
from holomed.projection.schedule import FPS_MAX, FPS_MIN, PyramidGeometry

STORE_ENV = "HOLOMED_STORE"


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8700
    store_dir: Path = Path("./holomed-data")
    pack_dir: Path = Path("./holomed-assets")
    static_dir: Optional[Path] = None
    fps: int = 25
    rotation_period_ms: int = 1600
    face_angle_deg: float = 47.0
    threshold_frac: float = 0.25
    window_ms: int = 800
    seed_defaults: bool = True
    gate: GateConfig = field(default_factory=GateConfig)

    def geometry(self) -> PyramidGeometry:
        return PyramidGeometry(face_angle_deg=self.face_angle_deg)

    def validate(self) -> None:
        if not (FPS_MIN <= self.fps <= FPS_MAX):
            raise ConfigError(f"fps must lie in [{FPS_MIN}, {FPS_MAX}], got {self.fps}")
        if self.rotation_period_ms < 400:
            raise ConfigError("rotation_period_ms must be >= 400")
        if not self.pack_dir.is_dir():
            raise ConfigError(f"spritesheet pack directory not found: {self.pack_dir}")
        if self.static_dir is not None and not self.static_dir.is_dir():
            raise ConfigError(f"static directory not found: {self.static_dir}")
        try:
            self.geometry()
        except InputError as e:
            raise ConfigError(str(e)) from None


def load_config(path) -> ServerConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None

    cfg = ServerConfig()
    base = path.parent

    def as_path(value) -> Path:
        p = Path(value)
        return p if p.is_absolute() else base / p

    for key in ("host",):
        if key in data:
            cfg.host = str(data[key])
    if "port" in data:
        cfg.port = int(data["port"])
    if "store_dir" in data:
        cfg.store_dir = as_path(data["store_dir"])
    if "pack_dir" in data:
        cfg.pack_dir = as_path(data["pack_dir"])
    if "static_dir" in data:
        cfg.static_dir = as_path(data["static_dir"])
    if "fps" in data:
        cfg.fps = int(data["fps"])
    if "seed_defaults" in data:
        cfg.seed_defaults = bool(data["seed_defaults"])

    hologram = data.get("hologram", {})
    if "rotation_period_ms" in hologram:
        cfg.rotation_period_ms = int(hologram["rotation_period_ms"])
    if "angle_deg" in hologram:
        cfg.face_angle_deg = float(hologram["angle_deg"])

    gestures = data.get("gestures", {})
    if "threshold_frac" in gestures:
        cfg.threshold_frac = float(gestures["threshold_frac"])
    if "window_ms" in gestures:
        cfg.window_ms = int(gestures["window_ms"])

    gate = data.get("gate", {})
    if gate:
        try:
            cfg.gate = GateConfig(
                gate_min=int(gate.get("gate_min", 400)),
                gate_max=int(gate.get("gate_max", 1500)),
                band_min=int(gate.get("band_min", 700)),
                band_max=int(gate.get("band_max", 800)),
            )
        except InputError as e:
            raise ConfigError(f"gate: {e}") from None

    env_store = os.environ.get(STORE_ENV)
    if env_store:
        cfg.store_dir = Path(env_store)
    return cfg
