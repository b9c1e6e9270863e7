"""Sentence annotations and span segmentation.

Annotations (tokens, lemmas, POS, NER, coreference) come from a JSONL sidecar
file, one object per line:

    {"id": str, "tokens": [str], "lemmas": [str], "pos": [str],
     "ner": [[start, end, label]], "coref": [[[start, end], ...], ...]}

Token offsets are 0-based and end-exclusive. Tokens are grouped into spans by
three criteria: exact matches to AMR names, NER spans, and multiword
expressions from a fixed lexicon (in that priority order).
"""

import json
import os
from dataclasses import dataclass, field
from typing import List, Optional, Set, Tuple

from .amr import AMR

RESOURCE_ENV_VAR = 'LEAMR_RESOURCES'


class AnnotationError(Exception):
    pass


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int  # exclusive

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f'bad span ({self.start}, {self.end})')

    def __len__(self):
        return self.end - self.start

    def indices(self):
        return range(self.start, self.end)


@dataclass
class AnnotatedSentence:
    id: str
    tokens: List[str]
    lemmas: List[str]
    pos: List[str]
    ner: List[Tuple[int, int, str]] = field(default_factory=list)
    coref: List[List[Tuple[int, int]]] = field(default_factory=list)

    def validate(self):
        n = len(self.tokens)
        if len(self.lemmas) != n:
            raise AnnotationError(f'{self.id}: {len(self.lemmas)} lemmas for {n} tokens')
        if len(self.pos) != n:
            raise AnnotationError(f'{self.id}: {len(self.pos)} pos tags for {n} tokens')
        for s, e, _ in self.ner:
            if not (0 <= s < e <= n):
                raise AnnotationError(f'{self.id}: NER span ({s},{e}) out of range')
        spans = sorted((s, e) for s, e, _ in self.ner)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            if s2 < e1:
                raise AnnotationError(f'{self.id}: overlapping NER spans')
        for chain in self.coref:
            for s, e in chain:
                if not (0 <= s < e <= n):
                    raise AnnotationError(f'{self.id}: coref mention ({s},{e}) out of range')

    def coref_token_sets(self) -> List[Set[int]]:
        return [{i for s, e in chain for i in range(s, e)} for chain in self.coref]


def load_annotations(path) -> List[AnnotatedSentence]:
    sentences = []
    seen_ids = set()
    with open(path, encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AnnotationError(f'line {lineno}: invalid JSON: {exc}') from exc
            for key in ('id', 'tokens', 'lemmas', 'pos'):
                if key not in obj:
                    raise AnnotationError(f'line {lineno}: missing field {key!r}')
            sent = AnnotatedSentence(
                id=obj['id'],
                tokens=list(obj['tokens']),
                lemmas=list(obj['lemmas']),
                pos=list(obj['pos']),
                ner=[(int(s), int(e), str(l)) for s, e, l in obj.get('ner', [])],
                coref=[[(int(s), int(e)) for s, e in chain] for chain in obj.get('coref', [])],
            )
            sent.validate()
            if sent.id in seen_ids:
                raise AnnotationError(f'line {lineno}: duplicate id {sent.id!r}')
            seen_ids.add(sent.id)
            sentences.append(sent)
    return sentences


class MweLexicon:
    """Fixed list of multiword expressions, keyed by hyphen-joined lowercase
    lemma sequences (length >= 2)."""

    def __init__(self, entries=()):
        self.entries: Set[str] = set()
        self.max_len = 1
        for e in entries:
            self.add(e)

    def add(self, entry: str):
        entry = entry.strip().lower()
        if entry.count('-') < 1:
            return
        self.entries.add(entry)
        self.max_len = max(self.max_len, entry.count('-') + 1)

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    @classmethod
    def load(cls, path) -> 'MweLexicon':
        lex = cls()
        with open(path, encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith('#'):
                    lex.add(line)
        return lex

    @classmethod
    def default(cls) -> 'MweLexicon':
        """The bundled lexicon, or the one under $LEAMR_RESOURCES if set."""
        directory = os.environ.get(RESOURCE_ENV_VAR)
        if directory:
            path = os.path.join(directory, 'mwe_lexicon.txt')
        else:
            path = os.path.join(os.path.dirname(__file__), 'resources', 'mwe_lexicon.txt')
        return cls.load(path)


def amr_names(amr: AMR) -> List[List[str]]:
    """Ordered :op constant strings of each `name` node in the graph."""
    names = []
    for n, label in amr.nodes.items():
        if label != 'name' or amr.is_constant(n):
            continue
        ops = []
        for e in amr.edges:
            if e.parent == n and e.role.startswith(':op') and e.role[3:].isdigit():
                ops.append((int(e.role[3:]), amr.nodes[e.child].strip('"')))
        if ops:
            names.append([w for _, w in sorted(ops)])
    return names


def span_lemma(sent: AnnotatedSentence, span: Span) -> str:
    """Lowercase lemma of a span; multi-token spans join lemmas with hyphens."""
    return '-'.join(sent.lemmas[i].lower() for i in span.indices())


def span_text(sent: AnnotatedSentence, span: Span) -> str:
    return ' '.join(sent.tokens[i] for i in span.indices())


def segment_spans(sent: AnnotatedSentence, amr: Optional[AMR] = None,
                  mwe: Optional[MweLexicon] = None) -> List[Span]:
    """Segment tokens into spans. Multi-token spans come from (in priority
    order) exact matches to AMR names, NER spans, and longest-match MWE
    lexicon lookups; everything else is a singleton span. The result is a
    total, non-overlapping segmentation."""
    n = len(sent.tokens)
    taken = [False] * n
    multi: List[Span] = []

    def claim(start, end):
        if end - start < 2 or any(taken[start:end]):
            return
        for i in range(start, end):
            taken[i] = True
        multi.append(Span(start, end))

    if amr is not None:
        names = sorted(amr_names(amr), key=len, reverse=True)
        for name in names:
            if len(name) < 2:
                continue
            for start in range(0, n - len(name) + 1):
                if sent.tokens[start:start + len(name)] == name:
                    claim(start, start + len(name))

    for s, e, _ in sorted(sent.ner):
        claim(s, e)

    if mwe is not None and len(mwe):
        start = 0
        while start < n:
            if taken[start]:
                start += 1
                continue
            matched = False
            for length in range(min(mwe.max_len, n - start), 1, -1):
                if any(taken[start:start + length]):
                    continue
                key = '-'.join(sent.lemmas[i].lower() for i in range(start, start + length))
                if key in mwe:
                    claim(start, start + length)
                    matched = True
                    start += length
                    break
            if not matched:
                start += 1

    spans = multi + [Span(i, i + 1) for i in range(n) if not taken[i]]
    spans.sort()
    return spans
