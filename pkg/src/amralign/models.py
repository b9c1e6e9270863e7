"""Probabilistic scoring for all alignment phases.

Each phase combines an alignment table P_align (learned by hard EM), Skellam
projection-distance terms, and, for subgraphs, a factorized backoff plus an
exponentiated-PMI inductive bias. All scoring is done in natural-log space;
geometric means of probabilities become arithmetic means of logs.
"""

import json
import math
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from scipy.special import ive

from .amr import AMR, Edge, graph_neighbors, normalize_edge
from .alignment import AlignmentState
from .annotations import AnnotatedSentence, Span, span_lemma, span_text

MODEL_VERSION = '1'
EPSILON = 1e-8          # floor for unseen factors and labels
LOG_EPSILON = math.log(EPSILON)
PMF_FLOOR = 1e-300      # hard floor for the Skellam pmf
LOG_PMF_FLOOR = math.log(PMF_FLOOR)
MAX_PMF_DISTANCE = 10 ** 4


class ModelError(Exception):
    pass


@dataclass(frozen=True)
class SkellamParams:
    mu1: float = 1.0
    mu2: float = 1.0

    def __post_init__(self):
        if not (self.mu1 > 0 and self.mu2 > 0 and math.isfinite(self.mu1) and math.isfinite(self.mu2)):
            raise ModelError(f'Skellam means must be positive and finite: {self}')


@lru_cache(maxsize=65536)
def skellam_log_pmf(d: int, mu1: float, mu2: float) -> float:
    """log P(D = d) for D = N1 - N2 with N1 ~ Poisson(mu1), N2 ~ Poisson(mu2):
    exp(-(mu1+mu2)) * (mu1/mu2)^(d/2) * I_|d|(2 sqrt(mu1 mu2))."""
    if abs(d) > MAX_PMF_DISTANCE:
        return LOG_PMF_FLOOR
    x = 2.0 * math.sqrt(mu1 * mu2)
    scaled = ive(abs(d), x)  # I_v(x) * exp(-x), stable for large x
    if scaled > 0:
        log_bessel = math.log(scaled) + x
    else:
        # underflow: small-argument series leading term I_v(x) ~ (x/2)^v / v!
        log_bessel = abs(d) * math.log(x / 2.0) - math.lgamma(abs(d) + 1)
    logp = -(mu1 + mu2) + 0.5 * d * math.log(mu1 / mu2) + log_bessel
    return max(logp, LOG_PMF_FLOOR)


def skellam_pmf(d: int, params: SkellamParams) -> float:
    return math.exp(skellam_log_pmf(d, params.mu1, params.mu2))


def estimate_skellam(distances: Sequence[int]) -> SkellamParams:
    """Method-of-moments fit: mean m and variance v give mu1 = (v+m)/2 and
    mu2 = (v-m)/2, clamped to >= 0.01. Empty input yields the default prior."""
    distances = list(distances)
    if not distances:
        return SkellamParams()
    m = sum(distances) / len(distances)
    v = sum((d - m) ** 2 for d in distances) / len(distances)
    return SkellamParams(max((v + m) / 2.0, 0.01), max((v - m) / 2.0, 0.01))


# --- corpus co-occurrence statistics ------------------------------------

@dataclass
class CooccurrenceStats:
    """Counts over training sentence/AMR pairs, irrespective of alignments.
    All counts are binary per pair (does the pair contain both items)."""
    num_pairs: int = 0
    lemma_count: Dict[str, int] = field(default_factory=dict)
    concept_count: Dict[str, int] = field(default_factory=dict)
    concept_lemma: Dict[str, Dict[str, int]] = field(default_factory=dict)
    triple_lemma: Dict[str, Dict[str, int]] = field(default_factory=dict)
    lemma_freq: Dict[str, int] = field(default_factory=dict)
    lemma_rank: Dict[str, int] = field(default_factory=dict)

    @staticmethod
    def triple_key(parent_concept: str, role: str, child_concept: str) -> str:
        return f'{parent_concept} {role} {child_concept}'

    def observe(self, amr: AMR, sent: AnnotatedSentence, spans: Sequence[Span]):
        self.num_pairs += 1
        lemmas = {span_lemma(sent, sp) for sp in spans}
        concepts = set(amr.nodes.values())
        triples = {self.triple_key(amr.nodes[e.parent], e.role, amr.nodes[e.child])
                   for e in amr.edges}
        for s in lemmas:
            self.lemma_count[s] = self.lemma_count.get(s, 0) + 1
        for c in concepts:
            self.concept_count[c] = self.concept_count.get(c, 0) + 1
            row = self.concept_lemma.setdefault(c, {})
            for s in lemmas:
                row[s] = row.get(s, 0) + 1
        for t in triples:
            row = self.triple_lemma.setdefault(t, {})
            for s in lemmas:
                row[s] = row.get(s, 0) + 1
        for sp in spans:
            s = span_lemma(sent, sp)
            self.lemma_freq[s] = self.lemma_freq.get(s, 0) + 1

    def finalize(self):
        """Compute frequency ranks (1 = most frequent; ties broken by lemma)."""
        ordered = sorted(self.lemma_freq.items(), key=lambda kv: (-kv[1], kv[0]))
        self.lemma_rank = {s: i + 1 for i, (s, _) in enumerate(ordered)}

    def rank(self, lemma: str) -> int:
        # unseen lemmas are rarer than anything observed
        return self.lemma_rank.get(lemma, len(self.lemma_rank) + 1)

    def p_concept_given_lemma(self, concept: str, lemma: str) -> float:
        joint = self.concept_lemma.get(concept, {}).get(lemma, 0)
        denom = self.lemma_count.get(lemma, 0)
        if denom == 0 or joint == 0:
            return EPSILON
        return joint / denom

    def p_triple_given_parent_lemma(self, parent_concept: str, role: str,
                                    child_concept: str, lemma: str) -> float:
        joint = self.triple_lemma.get(self.triple_key(parent_concept, role, child_concept),
                                      {}).get(lemma, 0)
        denom = self.concept_lemma.get(parent_concept, {}).get(lemma, 0)
        if denom == 0 or joint == 0:
            return EPSILON
        return joint / denom

    def pmi(self, concept: str, lemma: str) -> float:
        """Add-one-smoothed PMI, floored at 0 for pairs never seen together."""
        joint = self.concept_lemma.get(concept, {}).get(lemma, 0)
        if joint == 0:
            return 0.0
        n = self.num_pairs + 1
        p_joint = (joint + 1) / n
        p_c = (self.concept_count.get(concept, 0) + 1) / n
        p_s = (self.lemma_count.get(lemma, 0) + 1) / n
        return math.log(p_joint / (p_c * p_s))


# --- model parameters ----------------------------------------------------

@dataclass
class ModelParams:
    subgraph_table: Dict[str, Dict[str, float]] = field(default_factory=dict)
    relation_table: Dict[str, Dict[str, float]] = field(default_factory=dict)
    reentrancy_table: Dict[str, Dict[str, float]] = field(default_factory=dict)
    subgraph_dist: SkellamParams = field(default_factory=SkellamParams)
    relation_parent_dist: SkellamParams = field(default_factory=SkellamParams)
    relation_child_dist: SkellamParams = field(default_factory=SkellamParams)
    reentrancy_parent_dist: SkellamParams = field(default_factory=SkellamParams)
    reentrancy_child_dist: SkellamParams = field(default_factory=SkellamParams)
    lambda_backoff: float = 0.1
    lambda_dup: float = 0.1
    use_distance: bool = True
    use_inductive_bias: bool = True
    stats: CooccurrenceStats = field(default_factory=CooccurrenceStats)

    def table_prob(self, table: Dict[str, Dict[str, float]], lemma: str,
                   label: str) -> Optional[float]:
        return table.get(lemma, {}).get(label)


def save_model(params: ModelParams, path):
    doc = {
        'version': MODEL_VERSION,
        'hyperparams': {
            'lambda_backoff': params.lambda_backoff,
            'lambda_dup': params.lambda_dup,
            'use_distance': params.use_distance,
            'use_inductive_bias': params.use_inductive_bias,
        },
        'tables': {
            'subgraph': params.subgraph_table,
            'relation': params.relation_table,
            'reentrancy': params.reentrancy_table,
        },
        'skellam': {
            'subgraph': asdict(params.subgraph_dist),
            'relation_parent': asdict(params.relation_parent_dist),
            'relation_child': asdict(params.relation_child_dist),
            'reentrancy_parent': asdict(params.reentrancy_parent_dist),
            'reentrancy_child': asdict(params.reentrancy_child_dist),
        },
        'stats': asdict(params.stats),
    }
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(doc, f, sort_keys=True, indent=1)
        f.write('\n')


def load_model(path) -> ModelParams:
    try:
        with open(path, encoding='utf-8') as f:
            doc = json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelError(f'corrupt model file {path}: {exc}') from exc
    version = doc.get('version')
    if version != MODEL_VERSION:
        raise ModelError(f'model version mismatch: file has {version!r}, '
                         f'expected {MODEL_VERSION!r}')
    hp = doc['hyperparams']
    sk = {k: SkellamParams(**v) for k, v in doc['skellam'].items()}
    stats = CooccurrenceStats(**doc['stats'])
    return ModelParams(
        subgraph_table=doc['tables']['subgraph'],
        relation_table=doc['tables']['relation'],
        reentrancy_table=doc['tables']['reentrancy'],
        subgraph_dist=sk['subgraph'],
        relation_parent_dist=sk['relation_parent'],
        relation_child_dist=sk['relation_child'],
        reentrancy_parent_dist=sk['reentrancy_parent'],
        reentrancy_child_dist=sk['reentrancy_child'],
        lambda_backoff=hp['lambda_backoff'],
        lambda_dup=hp['lambda_dup'],
        use_distance=hp['use_distance'],
        use_inductive_bias=hp['use_inductive_bias'],
        stats=stats,
    )


# --- span-level probabilities --------------------------------------------

PUNCT_CHARS = set('.,;:!?()[]{}"\'`-—…')


def _is_punctuation(text: str) -> bool:
    return bool(text) and all((not ch.isalnum()) for ch in text)


def _in_parentheses(sent: AnnotatedSentence, span: Span) -> bool:
    open_before = any(t == '(' for t in sent.tokens[:span.start])
    close_after = any(t == ')' for t in sent.tokens[span.end:])
    return open_before and close_after


def null_align_prob(span: Span, sent: AnnotatedSentence, frequency_rank: int,
                    spans: Optional[Sequence[Span]] = None) -> float:
    """Probability that a span is null-aligned: max(rank^-1/2, 0.01), with
    overrides of 0.5 for punctuation, parenthesized, or coreferent spans and
    0.1 for spans repeated in the sentence (checked in that order)."""
    text = span_text(sent, span)
    if _is_punctuation(text):
        return 0.5
    if _in_parentheses(sent, span):
        return 0.5
    span_tokens = set(span.indices())
    for chain in sent.coref_token_sets():
        if span_tokens & chain:
            return 0.5
    if spans is not None:
        lemma = span_lemma(sent, span)
        repeats = sum(1 for sp in spans if span_lemma(sent, sp) == lemma)
        if repeats >= 2:
            return 0.1
    return max(frequency_rank ** -0.5, 0.01)


def log_null_prob(state: AlignmentState, span_i: int, stats: CooccurrenceStats) -> float:
    rank = stats.rank(state.lemma(span_i))
    return math.log(null_align_prob(state.spans[span_i], state.sent, rank, state.spans))


# --- subgraph scoring -----------------------------------------------------

def subgraph_label(amr: AMR, nodes: Iterable[str]) -> str:
    """Model label for a subgraph: sorted bag of concept labels plus sorted
    (parent concept, role, child concept) triples, in surface orientation."""
    nodes = set(nodes)
    concepts = sorted(amr.nodes[n] for n in nodes)
    triples = sorted(f'{amr.nodes[e.parent]} {e.role} {amr.nodes[e.child]}'
                     for e in amr.edges if e.parent in nodes and e.child in nodes)
    return ','.join(concepts) + '||' + ','.join(triples)


def subgraph_root(amr: AMR, nodes: Iterable[str]) -> str:
    """The subgraph node with no surface parent inside the subgraph (falls
    back to the first node in depth-first order)."""
    nodes = set(nodes)
    with_parent = {e.child for e in amr.edges if e.parent in nodes and e.child in nodes}
    for n in amr.dfs_order():
        if n in nodes and n not in with_parent:
            return n
    return next(n for n in amr.dfs_order() if n in nodes)


def factorized_backoff(amr: AMR, nodes: Iterable[str], lemma: str,
                       stats: CooccurrenceStats, lam: float) -> float:
    """Eq.-4-style backoff: lambda * p(root concept | lemma) * product over
    internal triples of p(role, child concept | parent concept, lemma)."""
    nodes = set(nodes)
    root = subgraph_root(amr, nodes)
    p = lam * stats.p_concept_given_lemma(amr.nodes[root], lemma)
    for e in amr.edges:
        if e.parent in nodes and e.child in nodes:
            p *= stats.p_triple_given_parent_lemma(
                amr.nodes[e.parent], e.role, amr.nodes[e.child], lemma)
    return max(p, PMF_FLOOR)


def inductive_bias(amr: AMR, nodes: Iterable[str], lemma: str,
                   stats: CooccurrenceStats) -> float:
    """Mean over the subgraph's nodes of exp(PMI(node concept, lemma))."""
    nodes = list(nodes)
    if not nodes:
        return 1.0
    return sum(math.exp(stats.pmi(amr.nodes[n], lemma)) for n in nodes) / len(nodes)


def projection_distance(state: AlignmentState, n1: str, n2: str) -> Optional[int]:
    """Signed span distance from n1 to n2; None if either node is unaligned."""
    s1, s2 = state.span_of_node(n1), state.span_of_node(n2)
    if s1 is None or s2 is None:
        return None
    return s2 - s1


def _neighbor_distances(state: AlignmentState, nodes: Iterable[str], span_i: int) -> List[int]:
    nodes = set(nodes)
    dists = []
    for nb in sorted(graph_neighbors(state.amr, nodes)):
        s = state.span_of_node(nb)
        if s is not None:
            dists.append(s - span_i)
    return dists


def score_subgraph(nodes: Iterable[str], span_i: int, state: AlignmentState,
                   params: ModelParams) -> float:
    """Log score of aligning one subgraph to a span: log P_align plus the
    geometric-mean log Skellam over aligned-neighbor projection distances
    plus the log inductive bias."""
    nodes = list(nodes)
    if not nodes:
        return 0.0
    lemma = state.lemma(span_i)
    label = subgraph_label(state.amr, nodes)
    p = params.table_prob(params.subgraph_table, lemma, label)
    if p is not None and p > 0:
        log_align = math.log(p)
    else:
        log_align = math.log(factorized_backoff(state.amr, nodes, lemma,
                                                params.stats, params.lambda_backoff))
    score = log_align
    if params.use_distance:
        dists = _neighbor_distances(state, nodes, span_i)
        if dists:
            mu = params.subgraph_dist
            score += sum(skellam_log_pmf(d, mu.mu1, mu.mu2) for d in dists) / len(dists)
    if params.use_inductive_bias:
        score += math.log(max(inductive_bias(state.amr, nodes, lemma, params.stats),
                              PMF_FLOOR))
    return score


def score_span_subgraphs(subgraphs: Sequence[Iterable[str]], span_i: int,
                         state: AlignmentState, params: ModelParams) -> float:
    """Log score of all subgraphs aligned to one span, with a log lambda_dup
    penalty for each subgraph beyond the first."""
    subgraphs = [list(g) for g in subgraphs if list(g)]
    if not subgraphs:
        return 0.0
    score = (len(subgraphs) - 1) * math.log(params.lambda_dup)
    for g in subgraphs:
        score += score_subgraph(g, span_i, state, params)
    return score


# --- relation scoring -----------------------------------------------------

def normalize_relation_label(edges: Sequence[Edge], span_i: int,
                             state: AlignmentState) -> str:
    """Label for a relation alignment: sorted role multiset where each role is
    tagged '>' (outgoing: span aligned to the parent) or '<' (incoming: span
    aligned to the child). ':X-of' is rewritten as ':X' with the direction
    flipped. A single relation attached to neither side keeps its bare
    (normalized) role."""
    parts = []
    for e in edges:
        ne = normalize_edge(e)
        if state.span_of_node(ne.parent) == span_i:
            parts.append('>' + ne.role)
        elif state.span_of_node(ne.child) == span_i:
            parts.append('<' + ne.role)
        else:
            parts.append(ne.role)
    return ' '.join(sorted(parts))


def score_relation(edges: Sequence[Edge], span_i: int, state: AlignmentState,
                   params: ModelParams) -> float:
    """Log score of a relation alignment: log P_align for the normalized label
    plus geometric-mean log Skellam terms for parent and child distances."""
    edges = list(edges)
    if not edges:
        return 0.0
    lemma = state.lemma(span_i)
    label = normalize_relation_label(edges, span_i, state)
    p = params.table_prob(params.relation_table, lemma, label)
    if p is not None and p > 0:
        score = math.log(p)
    else:
        # unseen label: back off per edge to the triple/lemma co-occurrence
        # estimate, so stacking relations onto one span is not free and
        # predictive function words (like "when" for :time) can win
        score = 0.0
        for e in edges:
            # surface orientation, matching how the statistics were counted
            pt = params.stats.p_triple_given_parent_lemma(
                state.amr.nodes[e.parent], e.role, state.amr.nodes[e.child], lemma)
            score += math.log(max(params.lambda_backoff * pt, PMF_FLOOR))
    if params.use_distance:
        parent_d, child_d = relation_distances(edges, span_i, state)
        if parent_d:
            mu = params.relation_parent_dist
            score += sum(skellam_log_pmf(d, mu.mu1, mu.mu2) for d in parent_d) / len(parent_d)
        if child_d:
            mu = params.relation_child_dist
            score += sum(skellam_log_pmf(d, mu.mu1, mu.mu2) for d in child_d) / len(child_d)
    return score


def relation_distances(edges: Sequence[Edge], span_i: int,
                       state: AlignmentState) -> Tuple[List[int], List[int]]:
    """(parent distances, child distances) of each edge from the span, for
    the edges whose endpoint is subgraph-aligned."""
    parent_d, child_d = [], []
    for e in edges:
        sp = state.span_of_node(e.parent)
        sc = state.span_of_node(e.child)
        if sp is not None:
            parent_d.append(sp - span_i)
        if sc is not None:
            child_d.append(sc - span_i)
    return parent_d, child_d


# --- reentrancy scoring ---------------------------------------------------

def reentrancy_label(edge: Edge, rtype: str) -> str:
    return f'{normalize_edge(edge).role}|{rtype}'


def score_reentrancy(edge: Edge, rtype: str, span_i: int, state: AlignmentState,
                     params: ModelParams) -> float:
    """Log score of one reentrancy alignment: log P_align(role, type | lemma)
    plus log Skellam terms for the span-parent and span-child distances."""
    lemma = state.lemma(span_i)
    p = params.table_prob(params.reentrancy_table, lemma, reentrancy_label(edge, rtype))
    score = math.log(p) if (p is not None and p > 0) else LOG_EPSILON
    if params.use_distance:
        sp = state.span_of_node(edge.parent)
        sc = state.span_of_node(edge.child)
        if sp is not None:
            mu = params.reentrancy_parent_dist
            score += skellam_log_pmf(sp - span_i, mu.mu1, mu.mu2)
        if sc is not None:
            mu = params.reentrancy_child_dist
            score += skellam_log_pmf(sc - span_i, mu.mu1, mu.mu2)
    return score
