"""End-to-end acceptance suite.

Each test is one acceptance criterion; the conftest hook prints an
`ACCEPT <name>: PASS/FAIL` line per criterion when the suite runs.
"""

import copy
import json
import os
import random
import subprocess
import time

import numpy as np
import pytest

from amralign.alignment import write_alignments
from amralign.amr import Edge, is_isomorphic, parse_penman, serialize_penman
from amralign.annotations import Span, load_annotations
from amralign.evaluate import (LAYERS, coverage, evaluate, partial_match_prf)
from amralign.models import (SkellamParams, estimate_skellam, null_align_prob,
                             save_model, skellam_pmf)
from amralign.train import TrainConfig, align_corpus, prealign_corpus, train

from conftest import CORPUS_AMR, ROOT, SAMPLE_AMR
from oracles import partial_prf_naive
from test_decode import brute_force_subgraphs, default_params, random_pair
import test_decode


def test_accept_penman_round_trip(corpus_amrs, sample_pairs):
    amrs = list(corpus_amrs) + [a for _, a in sample_pairs]
    start = time.perf_counter()
    for amr in amrs:
        again = parse_penman(serialize_penman(amr), id=amr.id)
        assert is_isomorphic(amr, again), amr.id
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f'round trip took {elapsed:.1f}s'


def test_accept_full_coverage_invariants(trained):
    _, states = trained
    for st in states:
        assert st.node_coverage() == 100.0, st.sent.id
        assert st.edge_coverage() == 100.0, st.sent.id
        st.check_invariants()
    nodes, edges = coverage(states)
    assert nodes == 100.0 and edges == 100.0


def test_accept_rule_coverage(corpus_pairs):
    start = time.perf_counter()
    states = prealign_corpus(corpus_pairs)
    elapsed = time.perf_counter() - start
    nodes, edges = coverage(states)
    assert nodes >= 70.0, f'node coverage {nodes:.1f}%'
    assert edges >= 80.0, f'edge coverage {edges:.1f}%'
    assert elapsed < 60.0, f'rules pass took {elapsed:.1f}s'


def test_accept_fig2_regression(trained, sample_pairs):
    params, _ = trained
    states = align_corpus(sample_pairs, params)
    st = next(s for s in states if s.sent.id == 'sample_0001')
    st.check_invariants()
    amr = st.amr

    # "New York" is one span carrying the full name subgraph
    ny = st.span_of_node('n')
    assert st.text(ny) == 'New York'
    consts = [n for n in amr.nodes
              if amr.nodes[n] in ('"New"', '"York"')]
    name_nodes = {m for sub in st.subgraphs[ny] for m in sub}
    assert name_nodes == {'c', 'n', *consts}

    def rel_span_of(token):
        return st.span_index_of_token(st.sent.tokens.index(token))

    want = rel_span_of('want')
    assert Edge('w', ':ARG0', 'p') in st.relations[want]
    assert Edge('w', ':ARG1', 'v') in st.relations[want]
    visit = rel_span_of('visit')
    assert Edge('v', ':ARG1', 'c') in st.relations[visit]
    graduate = rel_span_of('graduate')
    assert Edge('g', ':ARG0', 'p') in st.relations[graduate]

    assert st.primary['p'] == Edge('w', ':ARG0', 'p')


def _random_items(rng, n):
    items = []
    for _ in range(n):
        toks = frozenset(rng.sample(range(8), rng.randint(1, 3)))
        elems = frozenset(rng.sample('abcdefgh', rng.randint(1, 3)))
        items.append((toks, elems))
    return items


def test_accept_metric_oracle(trained):
    rng = random.Random(90125)
    for _ in range(1000):
        gold = _random_items(rng, rng.randint(0, 5))
        pred = _random_items(rng, rng.randint(0, 5))
        fast = partial_match_prf(gold, pred)
        slow = partial_prf_naive(gold, pred)
        for a, b in zip(fast, slow):
            assert a == pytest.approx(b, abs=1e-12)

    _, states = trained
    report = evaluate(states, states)
    for layer in LAYERS:
        p, r, f = report.layers[layer]['exact']
        assert (p, r, f) == (1.0, 1.0, 1.0), layer


def test_accept_skellam_suite():
    grid = [0.5, 1.0, 2.0, 5.0]
    for mu1 in grid:
        for mu2 in grid:
            params = SkellamParams(mu1, mu2)
            total = sum(skellam_pmf(d, params) for d in range(-50, 51))
            assert abs(total - 1.0) < 1e-9, (mu1, mu2)
    for mu in grid:
        params = SkellamParams(mu, mu)
        for d in range(-20, 21):
            assert skellam_pmf(d, params) == pytest.approx(
                skellam_pmf(-d, params), rel=1e-12)
    rng = np.random.default_rng(7)
    samples = rng.poisson(3.0, 100000) - rng.poisson(1.0, 100000)
    est = estimate_skellam([int(x) for x in samples])
    assert abs(est.mu1 - 3.0) / 3.0 < 0.05
    assert abs(est.mu2 - 1.0) / 1.0 < 0.05


def test_accept_decoder_oracle():
    from amralign.decode import align_subgraphs, subgraph_global_score
    rng = random.Random(12345)
    params = default_params()
    for _ in range(50):
        state = random_pair(rng)
        replay = copy.deepcopy(state)
        trace = []
        align_subgraphs(state, params, trace=trace)
        for step in trace:
            before = subgraph_global_score(replay, params)
            cand = step.candidate
            replay.add_node(cand.span, cand.subgraph_index, cand.target)
            after = subgraph_global_score(replay, params)
            assert after - before == pytest.approx(step.delta, abs=1e-9)

    # repeated-word construction: each visit-01 takes the nearer "visit"
    state = test_decode.plain_state(
        ['dog', 'visit', 'and', 'visit', 'cat'],
        '(a / and :op1 (v1 / visit-01 :ARG1 (d / dog)) '
        ':op2 (v2 / visit-01 :ARG1 (c / cat)))')
    params = default_params()
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
    assert best.span_of_node('v1') == 1
    assert best.span_of_node('v2') == 3


def test_accept_null_align_table():
    from amralign.annotations import AnnotatedSentence
    sent = AnnotatedSentence(id='t', tokens=['word'], lemmas=['word'],
                             pos=['NN'], ner=[], coref=[])
    sp = Span(0, 1)
    assert null_align_prob(sp, sent, 1) == 1.0
    assert null_align_prob(sp, sent, 100) == pytest.approx(0.1)
    assert null_align_prob(sp, sent, 10 ** 6) == pytest.approx(0.01)
    punct = AnnotatedSentence(id='t', tokens=[','], lemmas=[','],
                              pos=[','], ner=[], coref=[])
    assert null_align_prob(Span(0, 1), punct, 1) == 0.5


def test_accept_determinism(corpus_pairs, tmp_path):
    outs = []
    for run in ('a', 'b'):
        params, states = train(corpus_pairs, TrainConfig())
        aligned = align_corpus(corpus_pairs, params)
        mpath = tmp_path / f'model_{run}.json'
        apath = tmp_path / f'align_{run}.json'
        save_model(params, mpath)
        write_alignments(aligned, apath)
        outs.append((mpath.read_bytes(), apath.read_bytes()))
    assert outs[0][0] == outs[1][0], 'model files differ between runs'
    assert outs[0][1] == outs[1][1], 'alignment files differ between runs'


def test_accept_distance_ablation(corpus_pairs):
    _, full_states = train(corpus_pairs, TrainConfig())
    params, ablated = train(corpus_pairs, TrainConfig(use_distance=False))
    assert params.use_distance is False
    for st in ablated:
        assert st.node_coverage() == 100.0
        st.check_invariants()
    changed = sum(1 for a, b in zip(full_states, ablated)
                  if json.dumps(a.to_json(), sort_keys=True)
                  != json.dumps(b.to_json(), sort_keys=True))
    assert changed >= 1


def test_accept_extractor_round_trip(tmp_path, corpus_amrs):
    # cross-component: the extractor's JSONL must satisfy the same schema
    # the aligner loads, for 100 corpus sentences plus a known entity one
    cli = os.path.join(ROOT, 'frontend', 'dist', 'cli.js')
    assert os.path.exists(cli), 'frontend not built'
    subset = tmp_path / 'subset.amr'
    with open(CORPUS_AMR, encoding='utf-8') as f:
        blocks = f.read().strip().split('\n\n')[:100]
    with open(SAMPLE_AMR, encoding='utf-8') as f:
        blocks.append(f.read().strip().split('\n\n')[0])
    subset.write_text('\n\n'.join(blocks) + '\n')
    out = tmp_path / 'anno.jsonl'
    subprocess.run(['node', cli, 'extract', '--amr', str(subset),
                    '--out', str(out)], check=True,
                   capture_output=True, text=True)
    sents = load_annotations(out)  # raises on any schema violation
    assert len(sents) == 101
    ny = next(s for s in sents if s.id == 'sample_0001')
    covered = set()
    for start, end, _label in ny.ner:
        covered.update(range(start, end))
    new_i = ny.tokens.index('New')
    assert {new_i, new_i + 1} <= covered, 'no NER span over "New York"'
