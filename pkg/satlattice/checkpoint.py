from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any


log = logging.getLogger(__name__)


def search_key(n: int, min_size: int, max_size: int, fix_chain: bool) -> str:
    return f"n={n};sizes={min_size}-{max_size};chain={'fixed' if fix_chain else 'free'}"


class ShardJournal:
    """Append-only JSON Lines log of completed search shards."""

    def __init__(self, path: Path | str) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if not self.path.exists():
            self.path.touch()

    def add(self, key: str, shard: int, families: list[list[int]], nodes: int) -> None:
        entry = {
            "key": key,
            "shard": shard,
            "families": families,
            "nodes": nodes,
            "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        }
        with self.path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(entry, sort_keys=True) + "\n")

    def list(self) -> list[dict[str, Any]]:
        rows: list[dict[str, Any]] = []
        try:
            with self.path.open("r", encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rows.append(json.loads(line))
                    except json.JSONDecodeError:
                        # a run killed mid-write leaves a truncated last line
                        log.warning("skipping unreadable checkpoint line in %s", self.path)
        except FileNotFoundError:
            return []
        return rows

    def completed(self, key: str) -> dict[int, dict[str, Any]]:
        """Shard number -> record, for records written under this search key."""
        return {int(r["shard"]): r for r in self.list() if r.get("key") == key}
