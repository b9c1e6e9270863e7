"""Greedy structure-aware decoding for the three statistical phases.

Each phase repeatedly scores the legal candidates of every unaligned node (or
edge) and commits the single candidate with the best score improvement, until
everything is aligned -- even if the last additions decrease the score.
Committed deltas are exact differences of the phase's global score, so the
greedy trace can be checked against exhaustive evaluation.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .amr import AMR, Edge, graph_neighbors, is_legal_subgraph, normalize_edge, reentrant_nodes
from .alignment import AlignmentState
from .models import (ModelParams, log_null_prob, score_relation, score_reentrancy,
                     score_span_subgraphs)

RELATION_CANDIDATE_POS = {'IN', 'TO', 'POS', 'PRP$', 'WRB'}

REENTRANCY_TYPES = ['coref', 'repetition', 'coordination', 'control',
                    'adjunct-control', 'unmarked-adjunct-control',
                    'comparative-control', 'pragmatic']

PRONOUN_CANON = {
    'i': 'i', 'me': 'i', 'my': 'i', 'mine': 'i', 'myself': 'i',
    'you': 'you', 'your': 'you', 'yours': 'you', 'yourself': 'you',
    'he': 'he', 'him': 'he', 'his': 'he', 'himself': 'he',
    'she': 'she', 'her': 'she', 'hers': 'she', 'herself': 'she',
    'it': 'it', 'its': 'it', 'itself': 'it',
    'we': 'we', 'us': 'we', 'our': 'we', 'ours': 'we', 'ourselves': 'we',
    'they': 'they', 'them': 'they', 'their': 'they', 'theirs': 'they',
    'themselves': 'they',
}

COORDINATION_CONCEPTS = {'and', 'or', 'contrast-01', 'either', 'neither', 'both'}
ADJUNCT_ROLES = {':purpose', ':time', ':manner', ':condition', ':concession', ':part'}
COMPARATIVE_CONCEPTS = {'have-degree-91', 'equal'}


@dataclass
class Candidate:
    span: int
    target: object          # node id or Edge
    subgraph_index: int = 0
    phase: str = 'subgraph'
    reentrancy_type: Optional[str] = None
    delta_score: float = 0.0


@dataclass
class TraceStep:
    candidate: Candidate
    delta: float


# --- subgraph phase -------------------------------------------------------

def subgraph_global_score(state: AlignmentState, params: ModelParams) -> float:
    """Sum over spans of the span's subgraph score, plus null-alignment log
    probabilities for spans with no subgraph."""
    total = 0.0
    for i in range(len(state.spans)):
        if state.subgraphs[i]:
            total += score_span_subgraphs(state.subgraphs[i], i, state, params)
        else:
            total += log_null_prob(state, i, params.stats)
    return total


def legal_candidates_subgraph(node: str, state: AlignmentState) -> List[Candidate]:
    """The three candidate categories of the subgraph phase: unaligned spans,
    spans aligned to a neighboring node (subgraph extension), and spans
    aligned to a same-concept node (duplicates)."""
    amr = state.amr
    cands: List[Candidate] = []
    seen: Set[Tuple[int, int]] = set()

    def add(span_i, sub_i):
        if (span_i, sub_i) not in seen:
            seen.add((span_i, sub_i))
            cands.append(Candidate(span=span_i, target=node, subgraph_index=sub_i))

    for nb in sorted(graph_neighbors(amr, {node})):
        loc = state.node_location(nb)
        if loc is None:
            continue
        span_i, sub_i = loc
        if is_legal_subgraph(amr, set(state.subgraphs[span_i][sub_i]) | {node}):
            add(span_i, sub_i)
    for span_i in range(len(state.spans)):
        if not state.subgraphs[span_i]:
            add(span_i, 0)
    concept = amr.nodes[node]
    for other in amr.dfs_order():
        if other == node or amr.nodes[other] != concept:
            continue
        loc = state.node_location(other)
        if loc is not None:
            add(loc[0], len(state.subgraphs[loc[0]]))
    if not cands:
        # fallback: all unaligned spans plus the spans of aligned neighbors
        for span_i in range(len(state.spans)):
            if not state.subgraphs[span_i]:
                add(span_i, 0)
        for nb in sorted(graph_neighbors(amr, {node})):
            span_i = state.span_of_node(nb)
            if span_i is not None:
                add(span_i, len(state.subgraphs[span_i]))
    return cands


def _subgraph_delta(state: AlignmentState, params: ModelParams,
                    cand: Candidate) -> float:
    """Exact global-score change of committing a subgraph candidate. Affected
    terms: the candidate span, the spans of the node's aligned neighbors
    (their distance terms gain the new node), and the candidate span's null
    term if previously unaligned."""
    node = cand.target
    affected = {cand.span}
    for nb in graph_neighbors(state.amr, {node}):
        s = state.span_of_node(nb)
        if s is not None:
            affected.add(s)

    def partial(include_new):
        total = 0.0
        for i in sorted(affected):
            if state.subgraphs[i]:
                total += score_span_subgraphs(state.subgraphs[i], i, state, params)
            else:
                total += log_null_prob(state, i, params.stats)
        return total

    before = partial(False)
    state.add_node(cand.span, cand.subgraph_index, node, rule='statistical')
    after = partial(True)
    _remove_node(state, node)
    return after - before


def _remove_node(state: AlignmentState, node: str):
    span_i, sub_i = state._node_loc.pop(node)
    sub = state.subgraphs[span_i][sub_i]
    sub.remove(node)
    if not sub:
        state.subgraphs[span_i].pop(sub_i)
        for n, (s, g) in list(state._node_loc.items()):
            if s == span_i and g > sub_i:
                state._node_loc[n] = (s, g - 1)
    state.provenance.pop(f'node:{node}', None)


def align_subgraphs(state: AlignmentState, params: ModelParams,
                    trace: Optional[List[TraceStep]] = None) -> AlignmentState:
    """Greedy subgraph/duplicate alignment over all unaligned nodes."""
    while True:
        unaligned = state.unaligned_nodes()
        if not unaligned:
            break
        node_rank = {n: i for i, n in enumerate(unaligned)}
        best: Optional[Tuple[float, Tuple[int, int, int], Candidate]] = None
        for n in unaligned:
            for cand in legal_candidates_subgraph(n, state):
                delta = _subgraph_delta(state, params, cand)
                tie = (node_rank[n], cand.span, cand.subgraph_index)
                if best is None or delta > best[0] or (delta == best[0] and tie < best[1]):
                    cand.delta_score = delta
                    best = (delta, tie, cand)
        _, _, cand = best
        state.add_node(cand.span, cand.subgraph_index, cand.target, rule='statistical')
        if trace is not None:
            trace.append(TraceStep(cand, cand.delta_score))
    return state


# --- relation phase -------------------------------------------------------

def relation_global_score(state: AlignmentState, params: ModelParams) -> float:
    """Sum of relation-alignment scores, plus null terms for spans with no
    alignment in either the subgraph or the relation layer."""
    total = 0.0
    for i in range(len(state.spans)):
        if state.relations[i]:
            total += score_relation(state.relations[i], i, state, params)
        elif not state.subgraphs[i]:
            total += log_null_prob(state, i, params.stats)
    return total


def _descendants(amr: AMR, node: str) -> Set[str]:
    children: Dict[str, List[str]] = {}
    for e in amr.edges:
        ne = normalize_edge(e)
        children.setdefault(ne.parent, []).append(ne.child)
    out = {node}
    stack = [node]
    while stack:
        for c in children.get(stack.pop(), []):
            if c not in out:
                out.add(c)
                stack.append(c)
    return out


def _tree_descendants(amr: AMR, node: str) -> Set[str]:
    """Descendants within the first-visit spanning tree from the root, so a
    reentrant back-edge does not drag outside material into a subtree."""
    children: Dict[str, List[str]] = {}
    for e in amr.edges:
        ne = normalize_edge(e)
        children.setdefault(ne.parent, []).append(ne.child)
    tree: Dict[str, List[str]] = {}
    visited = {amr.root}
    stack = [amr.root]
    while stack:
        n = stack.pop()
        for c in children.get(n, []):
            if c not in visited:
                visited.add(c)
                tree.setdefault(n, []).append(c)
                stack.append(c)
    out = {node}
    stack = [node]
    while stack:
        for c in tree.get(stack.pop(), []):
            if c not in out:
                out.add(c)
                stack.append(c)
    return out


def _span_pos_matches(state: AlignmentState, span_i: int) -> bool:
    return any(state.sent.pos[t] in RELATION_CANDIDATE_POS
               for t in state.spans[span_i].indices())


def legal_candidates_relation(edge: Edge, state: AlignmentState) -> List[Candidate]:
    """Candidate spans for one relation: role-constrained parent/child spans,
    or unaligned function-word spans between the parent and the child's
    subtree."""
    import re as _re
    role = edge.role
    cands: List[Candidate] = []
    seen: Set[int] = set()

    def add(span_i):
        if span_i is not None and span_i not in seen:
            seen.add(span_i)
            cands.append(Candidate(span=span_i, target=edge, phase='relation'))

    parent_span = state.span_of_node(edge.parent)
    child_span = state.span_of_node(edge.child)
    if _re.match(r'^:ARG\d+$', role) or _re.match(r'^:(op|snt)\d+$', role) or role == ':domain':
        add(parent_span)
    elif _re.match(r'^:ARG\d+-of$', role):
        add(child_span)
    elif role in (':name', ':polarity', ':li'):
        add(child_span)
    else:
        add(parent_span)
        add(child_span)
        if parent_span is not None and child_span is not None:
            desc_spans = sorted({state.span_of_node(d)
                                 for d in _tree_descendants(state.amr, normalize_edge(edge).child)
                                 if state.span_of_node(d) is not None})
            for span_i in range(len(state.spans)):
                if state.span_is_subgraph_aligned(span_i) or state.span_is_relation_aligned(span_i):
                    continue
                if not _span_pos_matches(state, span_i):
                    continue
                norm_parent_span = state.span_of_node(normalize_edge(edge).parent)
                norm_child_span = state.span_of_node(normalize_edge(edge).child)
                if norm_parent_span is None or norm_child_span is None:
                    continue
                between = any(min(norm_parent_span, d) < span_i < max(norm_parent_span, d)
                              for d in desc_spans)
                inside_child = any(min(norm_child_span, d) < span_i < max(norm_child_span, d)
                                   for d in desc_spans if d != norm_child_span)
                if between and not inside_child:
                    add(span_i)
    if not cands:
        add(parent_span)
        add(child_span)
        if not cands:
            add(0)
    return cands


def _relation_delta(state: AlignmentState, params: ModelParams,
                    cand: Candidate) -> float:
    span_i = cand.span
    edge = cand.target
    current = state.relations[span_i]
    before = score_relation(current, span_i, state, params)
    if not current and not state.subgraphs[span_i]:
        before += log_null_prob(state, span_i, params.stats)
    after = score_relation(list(current) + [edge], span_i, state, params)
    return after - before


def align_relations(state: AlignmentState, params: ModelParams,
                    trace: Optional[List[TraceStep]] = None) -> AlignmentState:
    """Greedy alignment of every edge not internal to a subgraph alignment."""
    while True:
        unaligned = state.unaligned_edges()
        if not unaligned:
            break
        edge_rank = {e: i for i, e in enumerate(unaligned)}
        best = None
        for e in unaligned:
            for cand in legal_candidates_relation(e, state):
                delta = _relation_delta(state, params, cand)
                tie = (edge_rank[e], cand.span)
                if best is None or delta > best[0] or (delta == best[0] and tie < best[1]):
                    cand.delta_score = delta
                    best = (delta, tie, cand)
        _, _, cand = best
        state.add_edge(cand.span, cand.target, rule='statistical')
        if trace is not None:
            trace.append(TraceStep(cand, cand.delta_score))
    return state


# --- reentrancy phase -----------------------------------------------------

def _norm_ancestors(amr: AMR, node: str) -> Set[str]:
    parents: Dict[str, List[str]] = {}
    for e in amr.edges:
        ne = normalize_edge(e)
        parents.setdefault(ne.child, []).append(ne.parent)
    out = {node}
    stack = [node]
    while stack:
        for p in parents.get(stack.pop(), []):
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def _subgraph_root_concept(state: AlignmentState, span_i: int) -> Optional[str]:
    from .models import subgraph_root
    if not state.subgraphs[span_i]:
        return None
    root = subgraph_root(state.amr, state.subgraphs[span_i][0])
    return state.amr.nodes[root]


def legal_candidates_reentrancy(edge: Edge, state: AlignmentState) -> List[Candidate]:
    """Union over the per-type rule tests of (span, type) candidates for one
    non-primary reentrant edge."""
    amr = state.amr
    ne = normalize_edge(edge)
    reentrant = ne.child
    parent = ne.parent
    reentrant_span = state.span_of_node(reentrant)
    parent_ancestors = _norm_ancestors(amr, parent)
    cands: List[Candidate] = []
    seen: Set[Tuple[int, str]] = set()

    def add(span_i, rtype):
        if span_i is None:
            return
        if (span_i, rtype) not in seen:
            seen.add((span_i, rtype))
            cands.append(Candidate(span=span_i, target=edge, phase='reentrancy',
                                   reentrancy_type=rtype))

    chains = state.sent.coref_token_sets()
    reentrant_tokens = (set(state.spans[reentrant_span].indices())
                        if reentrant_span is not None else set())
    for span_i in range(len(state.spans)):
        lemma = state.lemma(span_i)
        pos = state.sent.pos[state.spans[span_i].start]
        is_pronoun = pos in ('PRP', 'PRP$') or lemma in PRONOUN_CANON
        span_tokens = set(state.spans[span_i].indices())

        if is_pronoun:
            linked = any(span_tokens & ch and reentrant_tokens & ch for ch in chains)
            concept_match = PRONOUN_CANON.get(lemma) == amr.nodes.get(reentrant)
            if linked or concept_match or span_i == reentrant_span:
                add(span_i, 'coref')
        else:
            root_concept = _subgraph_root_concept(state, span_i)
            if (root_concept is not None and span_i != reentrant_span
                    and root_concept == amr.nodes[reentrant]):
                add(span_i, 'repetition')

        if state.subgraphs[span_i]:
            for sub in state.subgraphs[span_i]:
                for n in sub:
                    concept = amr.nodes[n]
                    if concept in COORDINATION_CONCEPTS and parent in _descendants(amr, n):
                        add(span_i, 'coordination')
                    has_edge_to_reentrant = any(
                        normalize_edge(e2).parent == n and normalize_edge(e2).child == reentrant
                        for e2 in amr.edges)
                    governs_parent = any(
                        normalize_edge(e2).parent == n and normalize_edge(e2).child in parent_ancestors
                        for e2 in amr.edges)
                    if has_edge_to_reentrant and governs_parent and n != parent \
                            and concept not in COORDINATION_CONCEPTS:
                        add(span_i, 'control')
                    if concept in COMPARATIVE_CONCEPTS and parent in _descendants(amr, n) \
                            and lemma in ('as', 'than', 'more', 'most', 'equal'):
                        add(span_i, 'comparative-control')

        for e2 in state.relations[span_i]:
            ne2 = normalize_edge(e2)
            if ne2.role in ADJUNCT_ROLES and parent in _descendants(amr, ne2.child):
                add(span_i, 'adjunct-control')

    parent_span = state.span_of_node(parent)
    if parent_span is not None:
        pos = state.sent.pos[state.spans[parent_span].start]
        if pos == 'VBG':
            add(parent_span, 'unmarked-adjunct-control')
        add(parent_span, 'pragmatic')
    else:
        add(0, 'pragmatic')
    return cands


def align_reentrancies(state: AlignmentState, params: ModelParams,
                       trace: Optional[List[TraceStep]] = None) -> AlignmentState:
    """Assign a (trigger span, type) to every non-primary incoming edge of
    each reentrant node; primary edges enter the layer with type 'primary'."""
    amr = state.amr
    reentrant = reentrant_nodes(amr)
    for node in [n for n in amr.dfs_order() if n in reentrant]:
        incoming = sorted(reentrant[node], key=amr.edges.index)
        primary = state.primary.get(node)
        if primary is None:
            primary = incoming[0]
            state.set_primary(node, primary, rule='fallback:dfs-order')
        pspan = state.span_of_edge(primary)
        if pspan is None:
            pspan = state.span_of_node(normalize_edge(primary).parent) or 0
        state.add_reentrancy(primary, pspan, 'primary', rule='rule:primary-edge')
        for e in incoming:
            if e == primary:
                continue
            cands = legal_candidates_reentrancy(e, state)
            best = None
            for cand in cands:
                s = score_reentrancy(e, cand.reentrancy_type, cand.span, state, params)
                tie = (cand.span, REENTRANCY_TYPES.index(cand.reentrancy_type))
                if best is None or s > best[0] or (s == best[0] and tie < best[1]):
                    cand.delta_score = s
                    best = (s, tie, cand)
            _, _, cand = best
            state.add_reentrancy(e, cand.span, cand.reentrancy_type, rule='statistical')
            if trace is not None:
                trace.append(TraceStep(cand, cand.delta_score))
    return state
