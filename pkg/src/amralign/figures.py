"""Evaluation figures rendered next to the delimited report output."""

import os
from typing import List, Optional, Sequence

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from .alignment import AlignmentState
from .evaluate import LAYERS, EvalReport
from .models import _neighbor_distances


def _f1_bars(report: EvalReport, path):
    layers = list(LAYERS)
    exact = [report.layers[l]['exact'][2] for l in layers]
    partial = [report.layers[l]['partial'][2] for l in layers]
    x = np.arange(len(layers))
    width = 0.38
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.bar(x - width / 2, exact, width, label='exact', color='#33658a')
    ax.bar(x + width / 2, partial, width, label='partial', color='#f6ae2d')
    ax.set_xticks(x)
    ax.set_xticklabels(layers)
    ax.set_ylim(0, 1.0)
    ax.set_ylabel('F1')
    ax.set_title('Alignment F1 by layer')
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _coverage_bars(report: EvalReport, path):
    names = ['span F1', 'node coverage', 'edge coverage']
    vals = [report.spans[2], report.node_coverage / 100.0, report.edge_coverage / 100.0]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(names, vals, color=['#86bbd8', '#758e4f', '#f26419'])
    ax.set_ylim(0, 1.0)
    ax.set_title('Spans and coverage')
    for i, v in enumerate(vals):
        ax.text(i, v + 0.02, f'{v:.2f}', ha='center')
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _distance_histogram(states: Sequence[AlignmentState], path):
    dists: List[int] = []
    for st in states:
        for span_i, subs in enumerate(st.subgraphs):
            for sub in subs:
                dists.extend(_neighbor_distances(st, sub, span_i))
    fig, ax = plt.subplots(figsize=(6, 4))
    if dists:
        lo, hi = min(dists), max(dists)
        ax.hist(dists, bins=np.arange(lo - 0.5, hi + 1.5, 1.0),
                color='#2f4858', edgecolor='white')
    ax.set_xlabel('projection distance (spans)')
    ax.set_ylabel('count')
    ax.set_title('Subgraph neighbor projection distances')
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figures(report: EvalReport, out_dir,
                   states: Optional[Sequence[AlignmentState]] = None) -> List[str]:
    """Write the report figures into out_dir; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    p = os.path.join(out_dir, 'alignment_f1.png')
    _f1_bars(report, p)
    paths.append(p)
    p = os.path.join(out_dir, 'spans_coverage.png')
    _coverage_bars(report, p)
    paths.append(p)
    if states:
        p = os.path.join(out_dir, 'distance_histogram.png')
        _distance_histogram(states, p)
        paths.append(p)
    return paths
