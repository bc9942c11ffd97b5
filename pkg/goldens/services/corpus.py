"""
Loading of the embedded golden corpus (``goldens/corpus/*.dsl``).
"""
import logging
from functools import lru_cache
from pathlib import Path

from django.conf import settings

from .dsl import parse_document, ParseError

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    pass


def default_corpus_dir():
    return Path(settings.SHADOW_GOLDEN_DIR)


def _corpus_files(path):
    if path.is_file():
        return [path]
    if not path.is_dir():
        raise CorpusError(f"golden path {path} does not exist")
    files = sorted(path.glob('*.dsl'))
    if not files:
        raise CorpusError(f"no *.dsl files in {path}")
    return files


@lru_cache(maxsize=8)
def _load(directory, signature):
    # signature only keys the cache: (name, mtime, size) per file
    path = Path(directory)
    files = _corpus_files(path)

    entries = []
    seen = {}
    for file in files:
        try:
            text = file.read_text(encoding='utf-8')
        except (OSError, UnicodeDecodeError) as exc:
            raise CorpusError(f"{file.name}: cannot read golden file: {exc}") from exc
        try:
            parsed = parse_document(text, source=file.stem)
        except ParseError as exc:
            raise CorpusError(f"{file.name}: {exc}") from exc
        for entry in parsed:
            if entry.corpus_key in seen:
                raise CorpusError(f"{file.name}: duplicate entry {entry.corpus_key} (first in {seen[entry.corpus_key]})")
            seen[entry.corpus_key] = file.name
            entries.append(entry)
    logger.info(f"Loaded {len(entries)} golden entries from {len(files)} files in {path}")
    return tuple(entries)


def load_corpus(directory=None):
    """All entries of a corpus directory (or single .dsl file), in file order. Cached until a file changes."""
    directory = Path(directory) if directory is not None else default_corpus_dir()
    path = directory.resolve()
    try:
        signature = tuple((f.name, f.stat().st_mtime_ns, f.stat().st_size) for f in _corpus_files(path))
    except OSError as exc:
        raise CorpusError(f"cannot read golden path {path}: {exc}") from exc
    return list(_load(str(path), signature))


def filter_entries(entries, geometry=None, kind=None, j=None):
    """Restrict to a geometry, kind and/or index set (``j`` may be an int or iterable)."""
    if isinstance(j, int):
        j = {j}
    elif j is not None:
        j = set(j)
    selected = []
    for entry in entries:
        if geometry is not None and entry.geometry != str(geometry):
            continue
        if kind is not None and entry.kind.value != str(kind):
            continue
        if j is not None and entry.j not in j:
            continue
        selected.append(entry)
    return selected


def group_by_geometry(entries):
    groups = {}
    for entry in entries:
        groups.setdefault(entry.geometry, []).append(entry)
    return groups
