"""Mention/entity link statistics: link probability, commonness, surface forms.

Source dumps are TSV, one (mention, entity) pair per line::

    mention <TAB> entity <TAB> pair_link_count <TAB> mention_occurrence_count

Snapshot layout (little-endian)::

    offset 0   8 bytes   magic b"ELFKB\\x00\\x00\\x00"
    offset 8   uint32    format version (1)
    offset 12  uint32    number of mentions
    offset 16  uint32    number of entities
    offset 20  uint32    number of pairs
    offset 24  ...       zlib-compressed UTF-8 TSV in the source format
"""

from __future__ import annotations

import logging
import re
import struct
import zlib
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

log = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"ELFKB\x00\x00\x00"
SNAPSHOT_VERSION = 1
_HEADER = struct.Struct("<8sIIII")
_SPACE_RE = re.compile(r"\s+")


class KBError(ValueError):
    """Inconsistent link statistics or unreadable KB file."""


def normalize_mention(text: str) -> str:
    return _SPACE_RE.sub(" ", text.strip().lower())


@dataclass(frozen=True)
class KBRecord:
    mention: str
    entity: str
    pair_link_count: int
    occurrence_count: int


class KnowledgeBase:
    """Immutable mention/entity statistics built by :func:`build_kb`."""

    def __init__(self, occurrences, links, pairs, records):
        self._occurrences: dict[str, int] = occurrences
        self._links: dict[str, int] = links
        # mention -> {entity: pair link count}
        self._pairs: dict[str, dict[str, int]] = pairs
        self._records: tuple[KBRecord, ...] = records
        self._lp = {m: links[m] / occurrences[m] for m in occurrences}
        index: dict[str, dict[str, float]] = {}
        for m, targets in pairs.items():
            total = links[m]
            for e, c in targets.items():
                index.setdefault(e, {})[m] = c / total
        self._forms = index
        # first token -> longest mention (in tokens) starting with it
        self.first_token_span: dict[str, int] = {}
        for m in occurrences:
            parts = m.split(" ")
            if len(parts) > self.first_token_span.get(parts[0], 0):
                self.first_token_span[parts[0]] = len(parts)
        self.max_mention_tokens = max(self.first_token_span.values(), default=0)

    @property
    def mentions(self):
        return self._occurrences.keys()

    @property
    def entities(self):
        return self._forms.keys()

    @property
    def records(self) -> tuple[KBRecord, ...]:
        return self._records

    def __len__(self):
        return len(self._occurrences)

    def __contains__(self, mention: str) -> bool:
        return mention in self._occurrences

    def occurrence_count(self, mention: str) -> int:
        return self._occurrences.get(mention, 0)

    def link_count(self, mention: str) -> int:
        return self._links.get(mention, 0)

    def pair_link_count(self, mention: str, entity: str) -> int:
        return self._pairs.get(mention, {}).get(entity, 0)

    def link_probability(self, mention: str) -> float:
        return self._lp.get(mention, 0.0)

    def commonness(self, mention: str, entity: str) -> float:
        targets = self._pairs.get(mention)
        if not targets:
            return 0.0
        return targets.get(entity, 0) / self._links[mention]

    def entities_of(self, mention: str) -> dict[str, float]:
        """Entities linked from ``mention`` with their commonness."""
        targets = self._pairs.get(mention)
        if not targets:
            return {}
        total = self._links[mention]
        return {e: c / total for e, c in targets.items()}

    def surface_forms(self, entity: str) -> set[tuple[str, float]]:
        return set(self._forms.get(entity, {}).items())

    def surface_form_map(self, entity: str) -> dict[str, float]:
        return self._forms.get(entity, {})

    def summary(self) -> dict[str, int]:
        return {
            "mentions": len(self._occurrences),
            "entities": len(self._forms),
            "pairs": sum(len(t) for t in self._pairs.values()),
        }


def build_kb(records: Iterable) -> KnowledgeBase:
    """Aggregate (mention, entity, pair_link_count, occurrence_count) records."""
    occurrences: dict[str, int] = {}
    links: dict[str, int] = {}
    pairs: dict[str, dict[str, int]] = {}
    kept: list[KBRecord] = []
    for rec in records:
        mention, entity, pair_count, occ = rec
        mention = normalize_mention(mention)
        if not mention or not entity:
            raise KBError(f"empty mention or entity in record {tuple(rec)!r}")
        if pair_count <= 0 or occ <= 0:
            raise KBError(f"non-positive count in record {tuple(rec)!r}")
        prev = occurrences.setdefault(mention, occ)
        if prev != occ:
            raise KBError(f"mention {mention!r} has inconsistent occurrence counts {prev} and {occ}")
        targets = pairs.setdefault(mention, {})
        if entity in targets:
            raise KBError(f"duplicate pair ({mention!r}, {entity!r})")
        targets[entity] = pair_count
        links[mention] = links.get(mention, 0) + pair_count
        if links[mention] > occ:
            raise KBError(
                f"mention {mention!r}: link count {links[mention]} exceeds occurrence count {occ}"
            )
        kept.append(KBRecord(mention, entity, pair_count, occ))
    return KnowledgeBase(occurrences, links, pairs, tuple(kept))


def iter_tsv(reader: Iterable[str]) -> Iterator[tuple[str, str, int, int]]:
    for lineno, line in enumerate(reader, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise KBError(f"line {lineno}: expected 4 tab-separated fields, got {len(parts)}")
        mention, entity, pair_count, occ = parts
        try:
            yield mention, entity, int(pair_count), int(occ)
        except ValueError as e:
            raise KBError(f"line {lineno}: counts must be integers") from e


def load_tsv(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as f:
        return build_kb(iter_tsv(f))


def write_tsv(kb: KnowledgeBase, out: IO[str]) -> None:
    for r in kb.records:
        out.write(f"{r.mention}\t{r.entity}\t{r.pair_link_count}\t{r.occurrence_count}\n")


def save_snapshot(kb: KnowledgeBase, path) -> None:
    body = "".join(
        f"{r.mention}\t{r.entity}\t{r.pair_link_count}\t{r.occurrence_count}\n" for r in kb.records
    ).encode("utf-8")
    s = kb.summary()
    with open(path, "wb") as f:
        f.write(_HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, s["mentions"], s["entities"], s["pairs"]))
        f.write(zlib.compress(body, 6))


def load_snapshot(path) -> KnowledgeBase:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise KBError(f"{path}: truncated KB snapshot")
    magic, version, n_mentions, _, n_pairs = _HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise KBError(f"{path}: not a KB snapshot")
    if version != SNAPSHOT_VERSION:
        raise KBError(f"{path}: unsupported snapshot version {version}")
    text = zlib.decompress(data[_HEADER.size :]).decode("utf-8")
    kb = build_kb(iter_tsv(text.splitlines()))
    s = kb.summary()
    if s["mentions"] != n_mentions or s["pairs"] != n_pairs:
        raise KBError(f"{path}: snapshot header does not match its contents")
    return kb


def load_kb(path) -> KnowledgeBase:
    """Load a snapshot or a TSV dump, sniffing the magic bytes."""
    with open(path, "rb") as f:
        head = f.read(len(SNAPSHOT_MAGIC))
    if head == SNAPSHOT_MAGIC:
        return load_snapshot(path)
    return load_tsv(path)
