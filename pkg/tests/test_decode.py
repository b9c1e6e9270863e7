import copy
import itertools
import random

import pytest

from amralign.amr import AMR, Edge, parse_penman
from amralign.annotations import AnnotatedSentence, Span
from amralign.alignment import AlignmentState
from amralign.decode import (align_reentrancies, align_relations, align_subgraphs,
                             legal_candidates_relation, legal_candidates_reentrancy,
                             legal_candidates_subgraph, relation_global_score,
                             subgraph_global_score)
from amralign.models import CooccurrenceStats, ModelParams

CONCEPTS = ['cat-01', 'dog', 'run-02', 'house', 'tree', 'sing-01']
ROLES = [':ARG0', ':ARG1', ':mod', ':time']


def plain_state(tokens, graph, pos=None):
    sent = AnnotatedSentence(id='t', tokens=tokens,
                             lemmas=[t.lower() for t in tokens],
                             pos=pos or ['NN'] * len(tokens), ner=[], coref=[])
    amr = parse_penman(graph, id='t')
    spans = [Span(i, i + 1) for i in range(len(tokens))]
    return AlignmentState(sent, amr, spans)


def default_params():
    stats = CooccurrenceStats()
    stats.num_pairs = 1
    stats.finalize()
    return ModelParams(stats=stats)


def random_pair(rng):
    """Small random sentence/AMR pair: up to 4 nodes, up to 4 spans."""
    n_nodes = rng.randint(1, 4)
    n_spans = rng.randint(2, 4)
    concepts = [rng.choice(CONCEPTS) for _ in range(n_nodes)]
    # attach each node to a random earlier one so the graph stays a tree
    children = {0: []}
    for i in range(1, n_nodes):
        children.setdefault(rng.randrange(i), []).append(i)
        children.setdefault(i, [])

    def render(i):
        s = f'(n{i} / {concepts[i]}'
        for j in children.get(i, []):
            s += f' {rng.choice(ROLES)} ' + render(j)
        return s + ')'

    graph = render(0)
    tokens = [rng.choice(['alpha', 'beta', 'gamma', 'delta']) for _ in range(n_spans)]
    return plain_state(tokens, graph)


def test_trace_deltas_match_global_score_differences():
    rng = random.Random(12345)
    params = default_params()
    for _ in range(50):
        state = random_pair(rng)
        replay = copy.deepcopy(state)
        from amralign.decode import TraceStep
        trace = []
        align_subgraphs(state, params, trace=trace)
        assert state.unaligned_nodes() == []
        state.check_invariants()
        # replay the committed candidates, checking each delta against a full
        # re-evaluation of the phase's global score
        for step in trace:
            before = subgraph_global_score(replay, params)
            cand = step.candidate
            replay.add_node(cand.span, cand.subgraph_index, cand.target)
            after = subgraph_global_score(replay, params)
            assert after - before == pytest.approx(step.delta, abs=1e-9)


def brute_force_subgraphs(state, params, node_options):
    """Exhaustively try every assignment of the unaligned nodes and return
    the best complete state by global score (ties: first in enumeration)."""
    nodes = state.unaligned_nodes()
    best = None
    for combo in itertools.product(*[node_options[n] for n in nodes]):
        trial = copy.deepcopy(state)
        ok = True
        for n, (kind, span_i) in zip(nodes, combo):
            if kind == 'new':
                trial.add_node(span_i, len(trial.subgraphs[span_i]), n)
            else:
                if not trial.subgraphs[span_i]:
                    ok = False
                    break
                from amralign.amr import is_legal_subgraph
                target = trial.subgraphs[span_i][0]
                if not is_legal_subgraph(trial.amr, set(target) | {n}):
                    ok = False
                    break
                trial.add_node(span_i, 0, n)
        if not ok:
            continue
        score = subgraph_global_score(trial, params)
        if best is None or score > best[0] + 1e-12:
            best = (score, trial)
    return best[1]


def test_repeated_word_nearer_token():
    # two visit-01 nodes, two "visit" tokens: the distance model must give
    # each node the nearer token, and greedy must match brute force
    state = plain_state(
        ['dog', 'visit', 'and', 'visit', 'cat'],
        '(a / and :op1 (v1 / visit-01 :ARG1 (d / dog)) '
        ':op2 (v2 / visit-01 :ARG1 (c / cat)))')
    params = default_params()
    # table keys follow subgraph_label: root concept plus '||' triple list
    params.subgraph_table = {
        'visit': {'visit-01||': 0.5},
        'dog': {'dog||': 0.9}, 'cat': {'cat||': 0.9}, 'and': {'and||': 0.9},
    }
    state.align_subgraph(0, ['d'], rule='rule:exact-lemma')
    state.align_subgraph(2, ['a'], rule='rule:exact-lemma')
    state.align_subgraph(4, ['c'], rule='rule:exact-lemma')

    greedy = copy.deepcopy(state)
    align_subgraphs(greedy, params)
    assert greedy.span_of_node('v1') == 1
    assert greedy.span_of_node('v2') == 3

    options = {n: [('new', i) for i in range(5)] + [('join', i) for i in range(5)]
               for n in state.unaligned_nodes()}
    best = brute_force_subgraphs(state, params, options)
    assert best.span_of_node('v1') == greedy.span_of_node('v1')
    assert best.span_of_node('v2') == greedy.span_of_node('v2')


def test_subgraph_candidates_categories():
    state = plain_state(['a', 'b', 'c'],
                        '(x / run-02 :ARG0 (y / dog) :ARG1 (z / dog))')
    state.align_subgraph(0, ['x'])
    state.align_subgraph(1, ['y'])
    cands = legal_candidates_subgraph('z', state)
    pairs = {(c.span, c.subgraph_index) for c in cands}
    assert (2, 0) in pairs          # unaligned span
    assert (0, 0) in pairs          # neighbor extension into x's subgraph
    assert (1, 1) in pairs          # duplicate next to the other dog


def test_decode_is_deterministic():
    rng = random.Random(99)
    params = default_params()
    for _ in range(10):
        state = random_pair(rng)
        a = align_subgraphs(copy.deepcopy(state), params)
        b = align_subgraphs(copy.deepcopy(state), params)
        assert a.to_json() == b.to_json()


def test_relation_candidates_role_constraints():
    state = plain_state(['w', 'b', 's'],
                        '(w / want-01 :ARG0 (b / boy) :ARG1-of (s / see-01))')
    state.align_subgraph(0, ['w'])
    state.align_subgraph(1, ['b'])
    state.align_subgraph(2, ['s'])
    cands = legal_candidates_relation(Edge('w', ':ARG0', 'b'), state)
    assert [c.span for c in cands] == [0]   # ARGn goes to the parent span
    cands = legal_candidates_relation(Edge('w', ':ARG1-of', 's'), state)
    assert [c.span for c in cands] == [2]   # ARGn-of goes to the child span


def test_relation_candidates_function_word_between():
    state = plain_state(['meet', 'at', 'park'],
                        '(m / meet-03 :location (p / park))',
                        pos=['VB', 'IN', 'NN'])
    state.align_subgraph(0, ['m'])
    state.align_subgraph(2, ['p'])
    spans = [c.span for c in legal_candidates_relation(Edge('m', ':location', 'p'), state)]
    assert 1 in spans               # "at" sits between parent and child
    assert 0 in spans and 2 in spans


def test_relation_function_word_not_inside_child_phrase():
    # "of" lies between the child and the child's own descendant, so it is
    # not a candidate for the higher edge
    state = plain_state(['eat', 'top', 'of', 'hill'],
                        '(e / eat-01 :location (t / top :part-of (h / hill)))',
                        pos=['VB', 'NN', 'IN', 'NN'])
    state.align_subgraph(0, ['e'])
    state.align_subgraph(1, ['t'])
    state.align_subgraph(3, ['h'])
    spans = [c.span for c in legal_candidates_relation(Edge('e', ':location', 't'), state)]
    assert 2 not in spans


def test_relation_decode_completes():
    state = plain_state(['w', 'b', 's'],
                        '(w / want-01 :ARG0 (b / boy) :ARG1 (s / sleep-01 :ARG0 b))')
    for i, n in enumerate(['w', 'b', 's']):
        state.align_subgraph(i, [n])
    params = default_params()
    align_relations(state, params)
    assert state.unaligned_edges() == []
    state.check_invariants()


def test_reentrancy_control_candidate():
    state = plain_state(['boy', 'wants', 'sleep'],
                        '(w / want-01 :ARG0 (b / boy) :ARG1 (s / sleep-01 :ARG0 b))')
    state.align_subgraph(0, ['b'])
    state.align_subgraph(1, ['w'])
    state.align_subgraph(2, ['s'])
    cands = legal_candidates_reentrancy(Edge('s', ':ARG0', 'b'), state)
    kinds = {(c.span, c.reentrancy_type) for c in cands}
    assert (1, 'control') in kinds          # "wants" is the control trigger
    assert any(t == 'pragmatic' for _, t in kinds)


def test_reentrancy_coref_candidate():
    sent = AnnotatedSentence(
        id='t', tokens=['man', 'sleeps', 'when', 'he', 'waits'],
        lemmas=['man', 'sleep', 'when', 'he', 'wait'],
        pos=['NN', 'VBZ', 'WRB', 'PRP', 'VBZ'], ner=[],
        coref=[[[0, 1], [3, 4]]])
    amr = parse_penman('(s / sleep-01 :ARG0 (m / man) '
                       ':time (w / wait-01 :ARG0 m))', id='t')
    state = AlignmentState(sent, amr, [Span(i, i + 1) for i in range(5)])
    state.align_subgraph(0, ['m'])
    state.align_subgraph(1, ['s'])
    state.align_subgraph(4, ['w'])
    cands = legal_candidates_reentrancy(Edge('w', ':ARG0', 'm'), state)
    kinds = {(c.span, c.reentrancy_type) for c in cands}
    assert (3, 'coref') in kinds


def test_reentrancy_coordination_candidate():
    state = plain_state(['boy', 'sings', 'and', 'dances'],
                        '(a / and :op1 (s / sing-01 :ARG0 (b / boy)) '
                        ':op2 (d / dance-01 :ARG0 b))')
    state.align_subgraph(0, ['b'])
    state.align_subgraph(1, ['s'])
    state.align_subgraph(2, ['a'])
    state.align_subgraph(3, ['d'])
    cands = legal_candidates_reentrancy(Edge('d', ':ARG0', 'b'), state)
    kinds = {(c.span, c.reentrancy_type) for c in cands}
    assert (2, 'coordination') in kinds


def test_reentrancy_decode_covers_all_extra_edges():
    state = plain_state(['boy', 'wants', 'sleep'],
                        '(w / want-01 :ARG0 (b / boy) :ARG1 (s / sleep-01 :ARG0 b))')
    state.align_subgraph(0, ['b'])
    state.align_subgraph(1, ['w'])
    state.align_subgraph(2, ['s'])
    params = default_params()
    align_relations(state, params)
    from amralign.rules import identify_primary_edges
    identify_primary_edges(state)
    align_reentrancies(state, params)
    types = {rtype for _, (_, rtype) in state.reentrancies.items()}
    assert 'primary' in types
    # both incoming edges of b are in the layer
    assert len(state.reentrancies) == 2
