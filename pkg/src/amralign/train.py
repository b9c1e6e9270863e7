"""Hard-EM training over the three alignment phases.

Each phase alternates a Viterbi E-step (re-decode every sentence from its
rule pre-alignment with the current parameters) with an M-step (smoothed
relative-frequency tables plus method-of-moments distance parameters), until
the corpus alignments stop changing or an iteration cap is hit. Rule
alignments are fixed: they are never overridden by decoding and they are
counted in every M-step.
"""

import copy
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .amr import AMR
from .annotations import AnnotatedSentence, MweLexicon, segment_spans
from .alignment import AlignmentState
from .decode import (align_relations, align_reentrancies, align_subgraphs,
                     relation_global_score, subgraph_global_score)
from .models import (CooccurrenceStats, ModelParams, _neighbor_distances,
                     estimate_skellam, normalize_relation_label,
                     reentrancy_label, relation_distances, score_reentrancy,
                     subgraph_label)
from .rules import identify_primary_edges, prealign_relations, prealign_subgraphs

log = logging.getLogger('amralign.train')

PHASES = ('subgraph', 'relation', 'reentrancy')


@dataclass
class TrainConfig:
    max_iterations: int = 10
    phases: Sequence[str] = PHASES
    lambda_dup: float = 0.1
    lambda_backoff: float = 0.1
    use_distance: bool = True
    use_inductive_bias: bool = True
    jobs: int = 1

    def __post_init__(self):
        for p in self.phases:
            if p not in PHASES:
                raise ValueError(f'unknown phase {p!r}; expected subset of {PHASES}')


def pair_corpus(amrs: Sequence[AMR],
                sentences: Sequence[AnnotatedSentence]) -> List[Tuple[AnnotatedSentence, AMR]]:
    """Match annotation records to AMRs by id, in corpus order."""
    by_id = {s.id: s for s in sentences}
    pairs = []
    for amr in amrs:
        if amr.id not in by_id:
            raise KeyError(f'no annotation record for AMR id {amr.id!r}')
        pairs.append((by_id[amr.id], amr))
    return pairs


def build_stats(pairs, mwe: Optional[MweLexicon] = None) -> CooccurrenceStats:
    if mwe is None:
        mwe = MweLexicon.default()
    stats = CooccurrenceStats()
    for sent, amr in pairs:
        stats.observe(amr, sent, segment_spans(sent, amr, mwe))
    stats.finalize()
    return stats


# --- M-step ---------------------------------------------------------------

def _smoothed_table(counts: Dict[str, Dict[str, int]]) -> Dict[str, Dict[str, float]]:
    """Add-0.1 relative frequencies; each row sums to less than one, leaving
    mass for the backoff estimate of unseen labels."""
    table = {}
    for lemma, row in counts.items():
        n = sum(row.values())
        v = len(row)
        denom = n + 0.1 * (v + 1)
        table[lemma] = {label: (c + 0.1) / denom for label, c in row.items()}
    return table


def _count(counts, lemma, label):
    row = counts.setdefault(lemma, {})
    row[label] = row.get(label, 0) + 1


def mstep_subgraph(states: Sequence[AlignmentState], params: ModelParams):
    counts: Dict[str, Dict[str, int]] = {}
    dists: List[int] = []
    for st in states:
        for span_i, subs in enumerate(st.subgraphs):
            for sub in subs:
                _count(counts, st.lemma(span_i), subgraph_label(st.amr, sub))
                dists.extend(_neighbor_distances(st, sub, span_i))
    params.subgraph_table = _smoothed_table(counts)
    params.subgraph_dist = estimate_skellam(dists)


def mstep_relation(states: Sequence[AlignmentState], params: ModelParams):
    counts: Dict[str, Dict[str, int]] = {}
    parent_d: List[int] = []
    child_d: List[int] = []
    for st in states:
        for span_i, edges in enumerate(st.relations):
            if not edges:
                continue
            _count(counts, st.lemma(span_i), normalize_relation_label(edges, span_i, st))
            pd, cd = relation_distances(edges, span_i, st)
            parent_d.extend(pd)
            child_d.extend(cd)
    params.relation_table = _smoothed_table(counts)
    params.relation_parent_dist = estimate_skellam(parent_d)
    params.relation_child_dist = estimate_skellam(child_d)


def mstep_reentrancy(states: Sequence[AlignmentState], params: ModelParams):
    counts: Dict[str, Dict[str, int]] = {}
    parent_d: List[int] = []
    child_d: List[int] = []
    for st in states:
        for e, (span_i, rtype) in st.reentrancies.items():
            if rtype == 'primary':
                continue
            _count(counts, st.lemma(span_i), reentrancy_label(e, rtype))
            sp = st.span_of_node(e.parent)
            sc = st.span_of_node(e.child)
            if sp is not None:
                parent_d.append(sp - span_i)
            if sc is not None:
                child_d.append(sc - span_i)
    params.reentrancy_table = _smoothed_table(counts)
    params.reentrancy_parent_dist = estimate_skellam(parent_d)
    params.reentrancy_child_dist = estimate_skellam(child_d)


_MSTEP = {'subgraph': mstep_subgraph, 'relation': mstep_relation,
          'reentrancy': mstep_reentrancy}


# --- E-step ---------------------------------------------------------------

def _decode_one(phase: str, base: AlignmentState, params: ModelParams) -> AlignmentState:
    st = copy.deepcopy(base)
    if phase == 'subgraph':
        align_subgraphs(st, params)
    elif phase == 'relation':
        align_relations(st, params)
    else:
        align_reentrancies(st, params)
    return st


def _decode_all(phase: str, bases: Sequence[AlignmentState], params: ModelParams,
                jobs: int) -> List[AlignmentState]:
    if jobs > 1 and len(bases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_decode_one, [phase] * len(bases), bases,
                                 [params] * len(bases), chunksize=8))
    return [_decode_one(phase, b, params) for b in bases]


def _phase_score(phase: str, states: Sequence[AlignmentState],
                 params: ModelParams) -> float:
    if phase == 'subgraph':
        return sum(subgraph_global_score(st, params) for st in states)
    if phase == 'relation':
        return sum(relation_global_score(st, params) for st in states)
    total = 0.0
    for st in states:
        for e, (span_i, rtype) in st.reentrancies.items():
            if rtype != 'primary':
                total += score_reentrancy(e, rtype, span_i, st, params)
    return total


def _signature(state: AlignmentState) -> str:
    return json.dumps(state.to_json(), sort_keys=True)


def train_phase(phase: str, bases: Sequence[AlignmentState], params: ModelParams,
                config: TrainConfig) -> List[AlignmentState]:
    """Hard EM for one phase. Returns the final decoded states."""
    prev_sigs: Optional[List[str]] = None
    states = list(bases)
    for it in range(1, config.max_iterations + 1):
        states = _decode_all(phase, bases, params, config.jobs)
        sigs = [_signature(st) for st in states]
        if prev_sigs is None:
            changed = len(states)
        else:
            changed = sum(1 for a, b in zip(sigs, prev_sigs) if a != b)
        score = _phase_score(phase, states, params)
        log.info('[%s] iteration %d: changed=%d score=%.4f', phase, it, changed, score)
        _MSTEP[phase](states, params)
        if prev_sigs is not None and changed == 0:
            break
        prev_sigs = sigs
    return states


# --- pipeline -------------------------------------------------------------

def train(pairs: Sequence[Tuple[AnnotatedSentence, AMR]],
          config: Optional[TrainConfig] = None,
          mwe: Optional[MweLexicon] = None) -> Tuple[ModelParams, List[AlignmentState]]:
    """Full training pipeline: co-occurrence statistics, rule pre-alignment,
    then hard EM phase by phase. Returns the trained parameters and the final
    alignment states for the training corpus."""
    if config is None:
        config = TrainConfig()
    if mwe is None:
        mwe = MweLexicon.default()
    stats = CooccurrenceStats()
    spans_by_id = {}
    for sent, amr in pairs:
        spans = segment_spans(sent, amr, mwe)
        spans_by_id[sent.id] = spans
        stats.observe(amr, sent, spans)
    stats.finalize()
    params = ModelParams(stats=stats, lambda_dup=config.lambda_dup,
                         lambda_backoff=config.lambda_backoff,
                         use_distance=config.use_distance,
                         use_inductive_bias=config.use_inductive_bias)

    states = [prealign_subgraphs(sent, spans_by_id[sent.id], amr)
              for sent, amr in pairs]
    if 'subgraph' in config.phases:
        states = train_phase('subgraph', states, params, config)
    if 'relation' in config.phases:
        for st in states:
            prealign_relations(st)
        states = train_phase('relation', states, params, config)
        for st in states:
            identify_primary_edges(st)
    if 'reentrancy' in config.phases:
        states = train_phase('reentrancy', states, params, config)
    return params, states


def align_corpus(pairs: Sequence[Tuple[AnnotatedSentence, AMR]],
                 params: ModelParams, phases: Sequence[str] = PHASES,
                 jobs: int = 1,
                 mwe: Optional[MweLexicon] = None) -> List[AlignmentState]:
    """Decode a corpus with fixed parameters (no EM)."""
    if mwe is None:
        mwe = MweLexicon.default()
    states = [prealign_subgraphs(sent, segment_spans(sent, amr, mwe), amr)
              for sent, amr in pairs]
    if 'subgraph' in phases:
        states = _decode_all('subgraph', states, params, jobs)
    if 'relation' in phases:
        for st in states:
            prealign_relations(st)
        states = _decode_all('relation', states, params, jobs)
        for st in states:
            identify_primary_edges(st)
    if 'reentrancy' in phases:
        states = _decode_all('reentrancy', states, params, jobs)
    return states


def prealign_corpus(pairs: Sequence[Tuple[AnnotatedSentence, AMR]],
                    mwe: Optional[MweLexicon] = None) -> List[AlignmentState]:
    """Rule passes only: subgraph rules, relation conventions, primary edges."""
    if mwe is None:
        mwe = MweLexicon.default()
    states = []
    for sent, amr in pairs:
        st = prealign_subgraphs(sent, segment_spans(sent, amr, mwe), amr)
        prealign_relations(st)
        identify_primary_edges(st)
        states.append(st)
    return states
