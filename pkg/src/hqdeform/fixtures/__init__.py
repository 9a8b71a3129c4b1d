"""Shipped example configurations."""
from __future__ import annotations

from pathlib import Path
from typing import List, Optional

HERE = Path(__file__).resolve().parent


def list_fixtures() -> List[str]:
    return sorted(p.stem for p in HERE.glob("*.json"))


def fixture_path(name: str) -> Optional[Path]:
    stem = Path(name).stem if name.endswith(".json") else name
    p = HERE / f"{stem}.json"
    return p if p.exists() else None
