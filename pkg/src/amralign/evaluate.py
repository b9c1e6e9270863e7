"""Evaluation of predicted alignments against gold alignments.

Exact scores count an alignment as correct only when both its token set and
its graph-element set (nodes, or edges, or edge+type) match a gold alignment.
Partial scores give each gold alignment the best Jaccard(nodes) *
Jaccard(tokens) credit over the predictions (and symmetrically for
precision). Span scores treat segmentation as a set of (start, end) pairs;
single-token spans are counted like any other span.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .alignment import AlignmentState

LAYERS = ('subgraph', 'duplicate', 'relation', 'reentrancy')

_ARG_ROLE = re.compile(r'^:ARG\d+(-of)?$')

Item = Tuple[FrozenSet[int], FrozenSet]


def _span_tokens(state: AlignmentState, span_i: int) -> FrozenSet[int]:
    return frozenset(state.spans[span_i].indices())


def layer_items(state: AlignmentState, layer: str,
                labeled: bool = True) -> List[Item]:
    """One (token set, element set) item per alignment in the given layer."""
    items: List[Item] = []
    if layer in ('subgraph', 'duplicate'):
        for span_i, subs in enumerate(state.subgraphs):
            chosen = subs[:1] if layer == 'subgraph' else subs[1:]
            for sub in chosen:
                items.append((_span_tokens(state, span_i), frozenset(sub)))
    elif layer == 'relation':
        for span_i, edges in enumerate(state.relations):
            if edges:
                items.append((_span_tokens(state, span_i), frozenset(edges)))
    elif layer == 'reentrancy':
        for e, (span_i, rtype) in state.reentrancies.items():
            elem = frozenset({(e, rtype)}) if labeled else frozenset({e})
            items.append((_span_tokens(state, span_i), elem))
    else:
        raise ValueError(f'unknown layer {layer!r}')
    return items


def _prf(correct: float, n_pred: float, n_gold: float) -> Tuple[float, float, float]:
    if not n_pred and not n_gold:
        # nothing to find and nothing predicted: perfect agreement
        return 1.0, 1.0, 1.0
    p = correct / n_pred if n_pred else 0.0
    r = correct / n_gold if n_gold else 0.0
    f = 2 * p * r / (p + r) if (p + r) else 0.0
    return p, r, f


def exact_match_prf(gold: Sequence[Item], pred: Sequence[Item]) -> Tuple[float, float, float]:
    from collections import Counter
    g, p = Counter(gold), Counter(pred)
    correct = sum(min(g[k], p[k]) for k in g)
    return _prf(correct, sum(p.values()), sum(g.values()))


def _jaccard(a: FrozenSet, b: FrozenSet) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _partial_credit(item: Item, others: Sequence[Item]) -> float:
    """Best Jaccard(elements) * Jaccard(tokens) over the other side; ties keep
    the first occurrence."""
    best = 0.0
    for toks, elems in others:
        c = _jaccard(item[1], elems) * _jaccard(item[0], toks)
        if c > best:
            best = c
    return best


def partial_match_prf(gold: Sequence[Item], pred: Sequence[Item]) -> Tuple[float, float, float]:
    if not gold and not pred:
        return 1.0, 1.0, 1.0
    recall_credit = sum(_partial_credit(g, pred) for g in gold)
    precision_credit = sum(_partial_credit(p, gold) for p in pred)
    p = precision_credit / len(pred) if pred else 0.0
    r = recall_credit / len(gold) if gold else 0.0
    f = 2 * p * r / (p + r) if (p + r) else 0.0
    return p, r, f


def span_f1(gold_states: Sequence[AlignmentState],
            pred_states: Sequence[AlignmentState]) -> Tuple[float, float, float]:
    correct = n_gold = n_pred = 0
    for g, p in zip(gold_states, pred_states):
        gs = {(sp.start, sp.end) for sp in g.spans}
        ps = {(sp.start, sp.end) for sp in p.spans}
        correct += len(gs & ps)
        n_gold += len(gs)
        n_pred += len(ps)
    return _prf(correct, n_pred, n_gold)


def coverage(states: Sequence[AlignmentState]) -> Tuple[float, float]:
    """(node coverage %, edge coverage %) pooled over the corpus."""
    nodes = aligned_nodes = edges = covered_edges = 0
    for st in states:
        nodes += len(st.amr.nodes)
        aligned_nodes += len(st._node_loc)
        edges += len(st.amr.edges)
        covered_edges += len(set(st.subgraph_internal_edges()) | set(st._edge_span))
    node_cov = 100.0 * aligned_nodes / nodes if nodes else 100.0
    edge_cov = 100.0 * covered_edges / edges if edges else 100.0
    return node_cov, edge_cov


def _relation_category(state: AlignmentState, span_i: int) -> str:
    """Argument structures attach edges to a span that also carries a
    subgraph; bare function-word attachments are single relations."""
    return 'argument-structure' if state.subgraphs[span_i] else 'single-relation'


def _relation_items_by_category(state: AlignmentState) -> Dict[str, List[Item]]:
    out: Dict[str, List[Item]] = {'argument-structure': [], 'single-relation': []}
    for span_i, edges in enumerate(state.relations):
        if edges:
            out[_relation_category(state, span_i)].append(
                (_span_tokens(state, span_i), frozenset(edges)))
    return out


def _reentrancy_items_by_type(state: AlignmentState,
                              labeled: bool) -> Dict[str, List[Item]]:
    out: Dict[str, List[Item]] = {}
    for e, (span_i, rtype) in state.reentrancies.items():
        elem = frozenset({(e, rtype)}) if labeled else frozenset({e})
        out.setdefault(rtype, []).append((_span_tokens(state, span_i), elem))
    return out


@dataclass
class EvalReport:
    layers: Dict[str, Dict[str, Tuple[float, float, float]]] = field(default_factory=dict)
    spans: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    node_coverage: float = 0.0
    edge_coverage: float = 0.0
    relation_breakdown: Dict[str, Dict[str, Tuple[float, float, float]]] = field(default_factory=dict)
    reentrancy_breakdown: Dict[str, Dict[str, Tuple[float, float, float]]] = field(default_factory=dict)
    labeled: bool = True
    num_sentences: int = 0

    def to_json(self) -> dict:
        def trip(t):
            return {'precision': t[0], 'recall': t[1], 'f1': t[2]}

        return {
            'num_sentences': self.num_sentences,
            'labeled_reentrancies': self.labeled,
            'layers': {layer: {mode: trip(t) for mode, t in modes.items()}
                       for layer, modes in self.layers.items()},
            'spans': trip(self.spans),
            'coverage': {'nodes': self.node_coverage, 'edges': self.edge_coverage},
            'relation_breakdown': {cat: {mode: trip(t) for mode, t in modes.items()}
                                   for cat, modes in self.relation_breakdown.items()},
            'reentrancy_breakdown': {rt: {mode: trip(t) for mode, t in modes.items()}
                                     for rt, modes in self.reentrancy_breakdown.items()},
        }


def _score_modes(gold: Sequence[Item], pred: Sequence[Item]) -> Dict[str, Tuple[float, float, float]]:
    return {'exact': exact_match_prf(gold, pred),
            'partial': partial_match_prf(gold, pred)}


def evaluate(gold_states: Sequence[AlignmentState],
             pred_states: Sequence[AlignmentState],
             labeled: bool = True) -> EvalReport:
    if len(gold_states) != len(pred_states):
        raise ValueError('gold and predicted corpora differ in size')
    for g, p in zip(gold_states, pred_states):
        if g.sent.id != p.sent.id:
            raise ValueError(f'sentence order mismatch: {g.sent.id!r} vs {p.sent.id!r}')

    report = EvalReport(labeled=labeled, num_sentences=len(gold_states))
    for layer in LAYERS:
        gold_items: List[Item] = []
        pred_items: List[Item] = []
        for g, p in zip(gold_states, pred_states):
            gold_items.extend(layer_items(g, layer, labeled))
            pred_items.extend(layer_items(p, layer, labeled))
        report.layers[layer] = _score_modes(gold_items, pred_items)

    report.spans = span_f1(gold_states, pred_states)
    report.node_coverage, report.edge_coverage = coverage(pred_states)

    for cat in ('argument-structure', 'single-relation'):
        gold_items, pred_items = [], []
        for g, p in zip(gold_states, pred_states):
            gold_items.extend(_relation_items_by_category(g)[cat])
            pred_items.extend(_relation_items_by_category(p)[cat])
        report.relation_breakdown[cat] = _score_modes(gold_items, pred_items)

    types = set()
    gold_by_type: Dict[str, List[Item]] = {}
    pred_by_type: Dict[str, List[Item]] = {}
    for g, p in zip(gold_states, pred_states):
        for rt, items in _reentrancy_items_by_type(g, labeled).items():
            gold_by_type.setdefault(rt, []).extend(items)
            types.add(rt)
        for rt, items in _reentrancy_items_by_type(p, labeled).items():
            pred_by_type.setdefault(rt, []).extend(items)
            types.add(rt)
    for rt in sorted(types):
        report.reentrancy_breakdown[rt] = _score_modes(
            gold_by_type.get(rt, []), pred_by_type.get(rt, []))
    return report


# --- rendering ------------------------------------------------------------

def format_report(report: EvalReport) -> str:
    """Human-readable table. Span scores include single-token spans."""
    lines = []
    lines.append(f'sentences: {report.num_sentences}   '
                 f'reentrancy labels: {"typed" if report.labeled else "untyped"}')
    lines.append('span identification (single-token spans included): '
                 f'P={report.spans[0]:.3f} R={report.spans[1]:.3f} F1={report.spans[2]:.3f}')
    lines.append(f'coverage: nodes {report.node_coverage:.1f}%  '
                 f'edges {report.edge_coverage:.1f}%')
    lines.append('')
    header = f'{"layer":<38}{"mode":<9}{"P":>8}{"R":>8}{"F1":>8}'
    lines.append(header)
    lines.append('-' * len(header))

    def rows(name, modes):
        for mode in ('exact', 'partial'):
            p, r, f = modes[mode]
            lines.append(f'{name:<38}{mode:<9}{p:>8.3f}{r:>8.3f}{f:>8.3f}')

    for layer in LAYERS:
        rows(layer, report.layers[layer])
    for cat, modes in report.relation_breakdown.items():
        rows(f'  relation/{cat}', modes)
    for rt, modes in report.reentrancy_breakdown.items():
        rows(f'  reentrancy/{rt}', modes)
    return '\n'.join(lines) + '\n'


def report_tsv(report: EvalReport) -> str:
    """Tab-delimited rows: section, name, mode, precision, recall, f1."""
    rows = [('section', 'name', 'mode', 'precision', 'recall', 'f1')]

    def add(section, name, mode, t):
        rows.append((section, name, mode, f'{t[0]:.6f}', f'{t[1]:.6f}', f'{t[2]:.6f}'))

    add('spans', 'spans', 'exact', report.spans)
    rows.append(('coverage', 'nodes', '-', f'{report.node_coverage:.6f}', '', ''))
    rows.append(('coverage', 'edges', '-', f'{report.edge_coverage:.6f}', '', ''))
    for layer in LAYERS:
        for mode, t in report.layers[layer].items():
            add('layer', layer, mode, t)
    for cat, modes in report.relation_breakdown.items():
        for mode, t in modes.items():
            add('relation-breakdown', cat, mode, t)
    for rt, modes in report.reentrancy_breakdown.items():
        for mode, t in modes.items():
            add('reentrancy-breakdown', rt, mode, t)
    return '\n'.join('\t'.join(r) for r in rows) + '\n'


def write_report(report: EvalReport, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(report_tsv(report))


def write_report_json(report: EvalReport, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(report.to_json(), f, indent=1, sort_keys=True)
        f.write('\n')
