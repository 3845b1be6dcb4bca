"""
Observation Dumps
=================
Paletted PNG frames with a JSON sidecar manifest. The palette is the fixed
class palette of ``labels.PALETTE``; the PNG pixel values are the class ids.
"""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import structlog
from PIL import Image

from .labels import PALETTE, LabelImage, palette_bytes

logger = structlog.get_logger(__name__)


def save_label_png(image: LabelImage, path: Path) -> None:
    """Write a class-id frame as a paletted PNG."""
    png = Image.new("P", (image.width, image.height))
    png.putpalette(palette_bytes())
    png.putdata(image.classes.flatten().tolist())
    path.parent.mkdir(parents=True, exist_ok=True)
    png.save(path, format="PNG")


def load_label_png(path: Path) -> LabelImage:
    with Image.open(path) as png:
        return LabelImage(np.array(png, dtype=np.uint8))


@dataclass
class FrameDump:
    """Sidecar entry for one dumped frame."""
    file: str
    episode: int
    step: int


@dataclass
class DumpManifest:
    """Sidecar manifest of a render dump."""
    scenario_id: str
    approach: str
    seed: int
    mode: dict[str, str]
    frames: list[FrameDump] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["palette"] = {label.name.lower(): list(color) for label, color in PALETTE.items()}
        return data

    def write(self, directory: Path) -> Path:
        path = directory / "frames.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(json.dumps(self.to_dict(), indent=2, sort_keys=True))
            f.write("\n")
        logger.info("render_manifest_written", path=str(path), frames=len(self.frames))
        return path
