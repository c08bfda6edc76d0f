"""
Classify every descriptor file in a directory, one worker thread per file.
"""
import asyncio
import logging
import time
from pathlib import Path
from typing import Dict, List, Optional

from descriptors import describe, parse_descriptor
from reductive import classify
from report import EXIT_ERROR

logger = logging.getLogger(__name__)


def classify_file(path: Path, max_group_order: Optional[int] = None,
                  max_rank: Optional[int] = None) -> Dict:
    """Result dict: {"ok": True, "report": ...} or {"ok": False, "error": ...}."""
    try:
        start = time.perf_counter()
        desc = parse_descriptor(path.read_bytes(), max_group_order=max_group_order, max_rank=max_rank)
        parsed = time.perf_counter()
        result = classify(desc, max_rank=max_rank)
        done = time.perf_counter()
    except (ValueError, OSError) as e:
        logger.warning(f"{path}: {e}")
        return {"ok": False, "path": str(path), "error": str(e)}
    return {
        "ok": True,
        "path": str(path),
        "description": describe(desc),
        "report": result,
        "timings_ms": {"parse": round((parsed - start) * 1000, 3),
                       "classify": round((done - parsed) * 1000, 3)},
    }


class BatchClassifier:
    def __init__(self, max_group_order: Optional[int] = None, max_rank: Optional[int] = None):
        self.max_group_order = max_group_order
        self.max_rank = max_rank
        self.results: Dict[str, Dict] = {}

    async def _run(self, path: Path):
        self.results[str(path)] = await asyncio.to_thread(
            classify_file, path, self.max_group_order, self.max_rank)

    async def classify_directory(self, directory: Path) -> List[Dict]:
        files = sorted(p for p in directory.glob("*.json") if p.is_file())
        logger.info(f"classifying {len(files)} descriptor files in {directory}")
        await asyncio.gather(*(self._run(p) for p in files))
        return [self.results[str(p)] for p in files]


def exit_code(results: List[Dict]) -> int:
    """3 if any file failed, otherwise the largest verdict code (0 for an empty directory)."""
    if any(not r["ok"] for r in results):
        return EXIT_ERROR
    return max((r["report"].exit_code for r in results), default=0)
