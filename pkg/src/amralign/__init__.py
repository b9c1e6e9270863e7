"""Toolkit for aligning AMR graphs to the token spans of English sentences.

Four alignment layers are produced: subgraphs, duplicate subgraphs,
relations, and reentrancies. Alignment combines deterministic rule passes
with unsupervised statistical models trained by hard EM, decoded greedily
under graph-structure constraints.
"""

from .amr import AMR, AMRError, Edge, load_corpus, parse_penman, serialize_penman
from .annotations import AnnotatedSentence, MweLexicon, Span, load_annotations, segment_spans
from .alignment import AlignmentState, read_alignments, write_alignments
from .models import ModelParams, SkellamParams, load_model, save_model
from .train import TrainConfig, align_corpus, pair_corpus, prealign_corpus, train
from .evaluate import EvalReport, evaluate

__version__ = '0.1.0'

__all__ = [
    'AMR', 'AMRError', 'Edge', 'load_corpus', 'parse_penman', 'serialize_penman',
    'AnnotatedSentence', 'MweLexicon', 'Span', 'load_annotations', 'segment_spans',
    'AlignmentState', 'read_alignments', 'write_alignments',
    'ModelParams', 'SkellamParams', 'load_model', 'save_model',
    'TrainConfig', 'align_corpus', 'pair_corpus', 'prealign_corpus', 'train',
    'EvalReport', 'evaluate',
    '__version__',
]
