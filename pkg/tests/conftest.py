import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # for oracles.py

from amralign.amr import load_corpus
from amralign.annotations import load_annotations
from amralign.train import TrainConfig, pair_corpus, train

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
# Point AMRALIGN_CORPUS at a directory holding corpus.amr/corpus.jsonl to run
# the corpus-wide suites against different data.
DATA = os.environ.get('AMRALIGN_CORPUS', os.path.join(ROOT, 'data'))

CORPUS_AMR = os.path.join(DATA, 'corpus.amr')
CORPUS_ANNO = os.path.join(DATA, 'corpus.jsonl')
SAMPLE_AMR = os.path.join(ROOT, 'data', 'sample.amr')
SAMPLE_ANNO = os.path.join(ROOT, 'data', 'sample.jsonl')


@pytest.fixture(scope='session')
def corpus_amrs():
    return load_corpus(CORPUS_AMR)


@pytest.fixture(scope='session')
def corpus_pairs(corpus_amrs):
    return pair_corpus(corpus_amrs, load_annotations(CORPUS_ANNO))


@pytest.fixture(scope='session')
def sample_pairs():
    return pair_corpus(load_corpus(SAMPLE_AMR), load_annotations(SAMPLE_ANNO))


def pytest_runtest_logreport(report):
    # one visible PASS/FAIL line per acceptance criterion, regardless of
    # output capturing
    if report.when != 'call' or 'test_acceptance.py::test_accept_' not in report.nodeid:
        return
    name = report.nodeid.split('::test_accept_')[-1]
    verdict = 'PASS' if report.passed else 'FAIL'
    sys.stderr.write(f'ACCEPT {name}: {verdict}\n')


@pytest.fixture(scope='session')
def trained(corpus_pairs, sample_pairs):
    """Model trained once on the bundled corpus plus the sample sentences."""
    params, states = train(list(corpus_pairs) + list(sample_pairs), TrainConfig())
    return params, states
