import random

import pytest

from amralign.amr import Edge, parse_penman
from amralign.annotations import AnnotatedSentence, Span
from amralign.alignment import AlignmentState
from amralign.evaluate import (LAYERS, coverage, evaluate, exact_match_prf,
                               format_report, layer_items, partial_match_prf,
                               report_tsv, span_f1)
from oracles import partial_prf_naive


def random_items(rng, n):
    items = []
    for _ in range(n):
        toks = frozenset(rng.sample(range(8), rng.randint(1, 3)))
        elems = frozenset(rng.sample('abcdefgh', rng.randint(1, 3)))
        items.append((toks, elems))
    return items


def test_partial_matches_naive_oracle():
    rng = random.Random(4242)
    for _ in range(300):
        gold = random_items(rng, rng.randint(0, 5))
        pred = random_items(rng, rng.randint(0, 5))
        fast = partial_match_prf(gold, pred)
        slow = partial_prf_naive(gold, pred)
        for a, b in zip(fast, slow):
            assert a == pytest.approx(b, abs=1e-12)


def test_exact_match_multiset_counting():
    a = (frozenset({0}), frozenset({'x'}))
    b = (frozenset({1}), frozenset({'y'}))
    p, r, f = exact_match_prf([a, a, b], [a, b, b])
    # one of the duplicated a's and one b match
    assert p == pytest.approx(2 / 3)
    assert r == pytest.approx(2 / 3)
    assert f == pytest.approx(2 / 3)


def test_partial_empty_sides():
    # both sides empty: perfect agreement; one side empty: complete miss
    assert partial_match_prf([], []) == (1.0, 1.0, 1.0)
    item = (frozenset({0}), frozenset({'x'}))
    assert partial_match_prf([item], []) == (0.0, 0.0, 0.0)


def test_partial_is_one_on_identical_sets():
    rng = random.Random(7)
    items = random_items(rng, 6)
    p, r, f = partial_match_prf(items, list(items))
    assert p == r == f == 1.0


def make_state(sid, tokens, graph, align):
    sent = AnnotatedSentence(id=sid, tokens=tokens,
                             lemmas=[t.lower() for t in tokens],
                             pos=['NN'] * len(tokens), ner=[], coref=[])
    amr = parse_penman(graph, id=sid)
    st = AlignmentState(sent, amr, [Span(i, i + 1) for i in range(len(tokens))])
    for span_i, nodes in align.items():
        st.align_subgraph(span_i, nodes)
    return st


def test_self_evaluation_is_perfect():
    st = make_state('e1', ['boy', 'runs'], '(r / run-02 :ARG0 (b / boy))',
                    {0: ['b'], 1: ['r']})
    st.add_edge(1, Edge('r', ':ARG0', 'b'))
    report = evaluate([st], [st])
    for layer in ('subgraph', 'relation'):
        for mode in ('exact', 'partial'):
            assert report.layers[layer][mode] == (1.0, 1.0, 1.0)
    assert report.spans == (1.0, 1.0, 1.0)


def test_evaluate_rejects_mismatched_corpora():
    st = make_state('e1', ['x'], '(a / alpha)', {0: ['a']})
    other = make_state('e2', ['x'], '(a / alpha)', {0: ['a']})
    with pytest.raises(ValueError):
        evaluate([st], [])
    with pytest.raises(ValueError):
        evaluate([st], [other])


def test_layer_items_split_duplicates():
    st = make_state('e1', ['visit', 'visit'],
                    '(a / and :op1 (v1 / visit-01) :op2 (v2 / visit-01))',
                    {0: ['v1', 'a']})
    st.add_node(0, 1, 'v2')
    subs = layer_items(st, 'subgraph')
    dups = layer_items(st, 'duplicate')
    assert len(subs) == 1 and len(dups) == 1
    assert dups[0][1] == frozenset({'v2'})


def test_reentrancy_labeled_vs_unlabeled():
    st = make_state('e1', ['boy', 'wants', 'sleep'],
                    '(w / want-01 :ARG0 (b / boy) :ARG1 (s / sleep-01 :ARG0 b))',
                    {0: ['b'], 1: ['w'], 2: ['s']})
    edge = Edge('s', ':ARG0', 'b')
    gold = st
    gold.add_reentrancy(edge, 1, 'control')
    pred = make_state('e1', ['boy', 'wants', 'sleep'],
                      '(w / want-01 :ARG0 (b / boy) :ARG1 (s / sleep-01 :ARG0 b))',
                      {0: ['b'], 1: ['w'], 2: ['s']})
    pred.add_reentrancy(edge, 1, 'coref')  # right span, wrong type
    labeled = evaluate([gold], [pred], labeled=True)
    unlabeled = evaluate([gold], [pred], labeled=False)
    assert labeled.layers['reentrancy']['exact'] == (0.0, 0.0, 0.0)
    assert unlabeled.layers['reentrancy']['exact'] == (1.0, 1.0, 1.0)


def test_span_f1_counts_singletons():
    a = make_state('e1', ['x', 'y'], '(a / alpha)', {})
    sent = AnnotatedSentence(id='e1', tokens=['x', 'y'], lemmas=['x', 'y'],
                             pos=['NN', 'NN'], ner=[], coref=[])
    b = AlignmentState(sent, parse_penman('(a / alpha)', id='e1'), [Span(0, 2)])
    p, r, f = span_f1([a], [b])
    assert p == 0.0 and r == 0.0


def test_coverage_pooled():
    full = make_state('e1', ['boy'], '(b / boy)', {0: ['b']})
    empty = make_state('e2', ['dog'], '(d / dog)', {})
    nodes, edges = coverage([full, empty])
    assert nodes == 50.0
    assert edges == 100.0  # neither graph has any edges


def test_relation_breakdown_categories():
    st = make_state('e1', ['meet', 'at', 'park'],
                    '(m / meet-03 :location (p / park))', {0: ['m'], 2: ['p']})
    st.add_edge(1, Edge('m', ':location', 'p'))  # bare function word
    report = evaluate([st], [st])
    assert report.relation_breakdown['single-relation']['exact'] == (1.0, 1.0, 1.0)
    # the argument-structure category is empty on both sides
    assert report.relation_breakdown['argument-structure']['exact'] == (1.0, 1.0, 1.0)


def test_report_rendering():
    st = make_state('e1', ['boy', 'runs'], '(r / run-02 :ARG0 (b / boy))',
                    {0: ['b'], 1: ['r']})
    st.add_edge(1, Edge('r', ':ARG0', 'b'))
    report = evaluate([st], [st])
    text = format_report(report)
    assert 'subgraph' in text and 'F1' in text
    tsv = report_tsv(report)
    rows = [line.split('\t') for line in tsv.strip().split('\n')]
    assert rows[0] == ['section', 'name', 'mode', 'precision', 'recall', 'f1']
    assert all(len(r) == 6 for r in rows)
