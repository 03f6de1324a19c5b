"""
JSON result cache for exhaustive classifications.

One file per (field, degree, mode), named class_p{p}r{r}_d{n}_{mode}.json. Every hit is
spot-checked by re-testing a few random members before it is returned.
"""
import json
import logging
import random
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from permpoly.criteria import is_pp
from permpoly.models import SCHEMA_VERSION, ClassificationResult, FieldSpec, Poly
from permpoly.ortho import is_orthomorphism
from permpoly.validation import CacheError
from services.settings import get_setting, load_settings

log = logging.getLogger(__name__)

_FILE_PATTERN = re.compile(r"^class_p(\d+)r(\d+)_d(\d+)_([a-z-]+)\.json$")


def cache_dir(settings: Optional[dict] = None) -> Path:
    """Cache directory from settings (PERMPOLY_CACHE_DIR wins)."""
    settings = settings if settings is not None else load_settings()
    return Path(get_setting("cache.dir", ".permpoly-cache", settings))


def cache_filename(field: FieldSpec, degree: int, mode: str) -> str:
    return f"class_p{field.p}r{field.r}_d{degree}_{mode}.json"


def save_result(result: ClassificationResult, directory: Path) -> Path:
    """Write a classification; returns the file path."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / cache_filename(result.field, result.degree, result.mode)
        payload = result.model_dump(mode="json", by_alias=True)
        path.write_text(json.dumps(payload, indent=1))
    except OSError as exc:
        raise CacheError(f"cannot write cache in {directory}: {exc}") from exc
    log.info("cached %d polynomials in %s", result.count, path)
    return path


def _members_hold(result: ClassificationResult, members: int, seed: int) -> bool:
    if not result.polynomials or members <= 0:
        return True
    rng = random.Random(seed)
    picks = rng.sample(result.polynomials, min(members, len(result.polynomials)))
    ortho = result.mode.startswith("ortho")
    for coeffs in picks:
        poly = Poly(field=result.field, coeffs=coeffs)
        ok = is_orthomorphism(poly).is_orthomorphism if ortho else is_pp(poly)
        if not ok or poly.degree != result.degree:
            log.warning("cached member %s failed revalidation", list(coeffs))
            return False
    return True


def read_result(path: Path) -> ClassificationResult:
    """
    Parse one cache file.

    Raises:
        CacheError: unreadable file, wrong schema version or malformed content
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"cannot read {path}: {exc}") from exc
    schema = data.pop("schema", None)
    if schema != SCHEMA_VERSION:
        raise CacheError(f"{path} has schema {schema}, expected {SCHEMA_VERSION}")
    try:
        return ClassificationResult.model_validate(data)
    except ValidationError as exc:
        raise CacheError(f"malformed cache file {path}: {exc.error_count()} error(s)") from exc


def load_result(
    field: FieldSpec,
    degree: int,
    mode: str,
    directory: Path,
    revalidate_members: int = 10,
    seed: int = 0,
) -> Optional[ClassificationResult]:
    """
    Cached classification for (field, degree, mode), or None on a miss.

    Stale entries (other schema, other modulus, failed revalidation) count as misses.
    """
    path = Path(directory) / cache_filename(field, degree, mode)
    if not path.exists():
        return None
    try:
        result = read_result(path)
    except CacheError as exc:
        log.warning("ignoring cache entry: %s", exc)
        return None
    if result.field != field:
        log.warning("ignoring %s: cached modulus %s differs from %s", path.name, result.field.modulus, field.modulus)
        return None
    if not _members_hold(result, revalidate_members, seed):
        log.warning("ignoring %s: revalidation failed", path.name)
        return None
    log.info("cache hit %s (%d polynomials)", path.name, result.count)
    return result


def cached_classification(
    field: FieldSpec,
    degree: int,
    mode: str,
    compute: Callable[[], ClassificationResult],
    directory: Optional[Path] = None,
    use_cache: bool = True,
    revalidate_members: int = 10,
) -> ClassificationResult:
    """Return the cached result when valid; otherwise compute, store and return it."""
    if not use_cache:
        return compute()
    directory = Path(directory) if directory is not None else cache_dir()
    hit = load_result(field, degree, mode, directory, revalidate_members)
    if hit is not None:
        return hit
    result = compute()
    save_result(result, directory)
    return result


def list_entries(directory: Path) -> List[Dict[str, object]]:
    """One summary per cache file, sorted by name."""
    directory = Path(directory)
    if not directory.is_dir():
        return []
    entries = []
    for path in sorted(directory.glob("class_*.json")):
        match = _FILE_PATTERN.match(path.name)
        if not match:
            continue
        p, r, degree, mode = match.groups()
        entry: Dict[str, object] = {"file": path.name, "p": int(p), "r": int(r),
                                    "q": int(p) ** int(r), "degree": int(degree), "mode": mode}
        try:
            entry["count"] = read_result(path).count
        except CacheError as exc:
            entry["count"] = None
            entry["error"] = str(exc)
        entries.append(entry)
    return entries


def clear_cache(directory: Path) -> int:
    """Delete every cache file; returns how many were removed."""
    removed = 0
    for entry in list_entries(directory):
        (Path(directory) / str(entry["file"])).unlink()
        removed += 1
    log.info("removed %d cache file(s) from %s", removed, directory)
    return removed
