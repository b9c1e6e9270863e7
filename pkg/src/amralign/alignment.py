"""Alignment state shared by the rule passes and the statistical decoder.

One AlignmentState holds the four alignment layers for a sentence/AMR pair:
subgraphs (per span, an ordered list of node sets; index 0 is the subgraph
layer, the rest are duplicates), relations (per span, a set of edges),
reentrancies (edge -> (span, type)), and the primary-edge choices. Provenance
records which rule (or "statistical") produced each alignment.
"""

import json
from typing import Dict, List, Optional, Set, Tuple

from .amr import AMR, Edge, is_legal_subgraph, normalize_edge
from .annotations import AnnotatedSentence, Span, span_lemma, span_text


class AlignmentError(Exception):
    pass


class AlignmentState:
    def __init__(self, sent: AnnotatedSentence, amr: AMR, spans: List[Span]):
        self.sent = sent
        self.amr = amr
        self.spans = list(spans)
        # per span: ordered list of subgraphs, each a list of node ids
        self.subgraphs: List[List[List[str]]] = [[] for _ in spans]
        # per span: list of aligned edges
        self.relations: List[List[Edge]] = [[] for _ in spans]
        self.reentrancies: Dict[Edge, Tuple[int, str]] = {}
        self.primary: Dict[str, Edge] = {}
        self.provenance: Dict[str, str] = {}
        self._node_loc: Dict[str, Tuple[int, int]] = {}
        self._edge_span: Dict[Edge, int] = {}

    # --- spans ---------------------------------------------------------
    def lemma(self, span_i: int) -> str:
        return span_lemma(self.sent, self.spans[span_i])

    def text(self, span_i: int) -> str:
        return span_text(self.sent, self.spans[span_i])

    def span_index_of_token(self, tok: int) -> int:
        for i, sp in enumerate(self.spans):
            if sp.start <= tok < sp.end:
                return i
        raise AlignmentError(f'token {tok} not covered by any span')

    # --- subgraph layer ------------------------------------------------
    def node_location(self, n: str) -> Optional[Tuple[int, int]]:
        """(span index, subgraph index) of an aligned node, else None."""
        return self._node_loc.get(n)

    def span_of_node(self, n: str) -> Optional[int]:
        loc = self._node_loc.get(n)
        return loc[0] if loc else None

    def is_node_aligned(self, n: str) -> bool:
        return n in self._node_loc

    def unaligned_nodes(self) -> List[str]:
        return [n for n in self.amr.dfs_order() if n not in self._node_loc]

    def span_is_subgraph_aligned(self, span_i: int) -> bool:
        return bool(self.subgraphs[span_i])

    def add_node(self, span_i: int, sub_i: int, n: str, rule: str = 'statistical'):
        """Add node n to the sub_i-th subgraph of span_i (creating it if
        sub_i equals the current count)."""
        if n in self._node_loc:
            raise AlignmentError(f'node {n} already aligned at {self._node_loc[n]}')
        subs = self.subgraphs[span_i]
        if sub_i == len(subs):
            subs.append([])
        elif sub_i > len(subs):
            raise AlignmentError(f'subgraph index {sub_i} out of range for span {span_i}')
        subs[sub_i].append(n)
        self._node_loc[n] = (span_i, sub_i)
        self.provenance[f'node:{n}'] = rule

    def align_subgraph(self, span_i: int, nodes: List[str], rule: str = 'statistical'):
        """Align a whole node set as a new subgraph of span_i."""
        sub_i = len(self.subgraphs[span_i])
        for n in nodes:
            self.add_node(span_i, sub_i, n, rule)

    def node_provenance(self, n: str) -> Optional[str]:
        return self.provenance.get(f'node:{n}')

    # --- edges ---------------------------------------------------------
    def subgraph_internal_edges(self) -> List[Edge]:
        """Edges with both endpoints in one aligned subgraph; these belong to
        that subgraph alignment and are excluded from the relation layer."""
        internal = []
        for e in self.amr.edges:
            lp, lc = self._node_loc.get(e.parent), self._node_loc.get(e.child)
            if lp is not None and lp == lc:
                internal.append(e)
        return internal

    def is_edge_aligned(self, e: Edge) -> bool:
        return e in self._edge_span

    def span_of_edge(self, e: Edge) -> Optional[int]:
        return self._edge_span.get(e)

    def unaligned_edges(self) -> List[Edge]:
        internal = set(self.subgraph_internal_edges())
        return [e for e in self.amr.edges if e not in internal and e not in self._edge_span]

    def add_edge(self, span_i: int, e: Edge, rule: str = 'statistical'):
        if e in self._edge_span:
            raise AlignmentError(f'edge {e} already aligned to span {self._edge_span[e]}')
        self.relations[span_i].append(e)
        self._edge_span[e] = span_i
        self.provenance[f'edge:{e.parent} {e.role} {e.child}'] = rule

    def span_is_relation_aligned(self, span_i: int) -> bool:
        return bool(self.relations[span_i])

    # --- reentrancies --------------------------------------------------
    def add_reentrancy(self, e: Edge, span_i: int, rtype: str, rule: str = 'statistical'):
        self.reentrancies[e] = (span_i, rtype)
        self.provenance[f'reent:{e.parent} {e.role} {e.child}'] = rule

    def set_primary(self, node: str, e: Edge, rule: str = 'rule:primary-edge'):
        self.primary[node] = e
        self.provenance[f'primary:{node}'] = rule

    # --- invariant checks ----------------------------------------------
    def check_invariants(self):
        """Mutual exclusivity, legality, and once-per-layer coverage checks.
        Raises AlignmentError on violation."""
        seen_nodes: Set[str] = set()
        for span_i, subs in enumerate(self.subgraphs):
            for sub in subs:
                if not sub:
                    raise AlignmentError(f'span {span_i}: empty subgraph')
                overlap = seen_nodes.intersection(sub)
                if overlap:
                    raise AlignmentError(f'nodes aligned twice: {sorted(overlap)}')
                seen_nodes.update(sub)
                if not is_legal_subgraph(self.amr, sub):
                    raise AlignmentError(f'span {span_i}: illegal subgraph {sorted(sub)}')
        internal = set(self.subgraph_internal_edges())
        seen_edges: Set[Edge] = set()
        for span_i, edges in enumerate(self.relations):
            for e in edges:
                if e in internal:
                    raise AlignmentError(f'edge {e} aligned both in a subgraph and as a relation')
                if e in seen_edges:
                    raise AlignmentError(f'edge {e} aligned twice in relation layer')
                seen_edges.add(e)

    def node_coverage(self) -> float:
        if not self.amr.nodes:
            return 100.0
        return 100.0 * len(self._node_loc) / len(self.amr.nodes)

    def edge_coverage(self) -> float:
        if not self.amr.edges:
            return 100.0
        covered = set(self.subgraph_internal_edges()) | set(self._edge_span)
        return 100.0 * len(covered) / len(self.amr.edges)

    # --- serialization -------------------------------------------------
    def to_json(self) -> dict:
        def edge_list(edges):
            return [[e.parent, e.role, e.child] for e in edges]

        def subgraph_entry(span_i, nodes):
            internal = [e for e in self.amr.edges
                        if e.parent in nodes and e.child in nodes]
            return {'span': span_i, 'nodes': list(nodes), 'edges': edge_list(internal)}

        out = {
            'id': self.sent.id,
            'spans': [[sp.start, sp.end] for sp in self.spans],
            'subgraphs': [], 'duplicates': [], 'relations': [], 'reentrancies': [],
        }
        for span_i, subs in enumerate(self.subgraphs):
            for sub_i, sub in enumerate(subs):
                entry = subgraph_entry(span_i, sub)
                (out['subgraphs'] if sub_i == 0 else out['duplicates']).append(entry)
        for span_i, edges in enumerate(self.relations):
            if edges:
                out['relations'].append({'span': span_i, 'edges': edge_list(edges)})
        for e, (span_i, rtype) in sorted(self.reentrancies.items(),
                                         key=lambda kv: (kv[1][0], kv[0])):
            out['reentrancies'].append(
                {'span': span_i, 'edge': [e.parent, e.role, e.child], 'type': rtype})
        return out

    @classmethod
    def from_json(cls, obj: dict, sent: AnnotatedSentence, amr: AMR) -> 'AlignmentState':
        spans = [Span(s, e) for s, e in obj['spans']]
        state = cls(sent, amr, spans)
        for entry in obj.get('subgraphs', []):
            state.align_subgraph(entry['span'], entry['nodes'], rule='loaded')
        for entry in obj.get('duplicates', []):
            state.align_subgraph(entry['span'], entry['nodes'], rule='loaded')
        for entry in obj.get('relations', []):
            for p, r, c in entry['edges']:
                state.add_edge(entry['span'], Edge(p, r, c), rule='loaded')
        for entry in obj.get('reentrancies', []):
            p, r, c = entry['edge']
            e = Edge(p, r, c)
            state.add_reentrancy(e, entry['span'], entry['type'], rule='loaded')
            if entry['type'] == 'primary':
                state.set_primary(normalize_edge(e).child, e, rule='loaded')
        return state


def write_alignments(states: List[AlignmentState], path, provenance: bool = False):
    out = []
    for st in states:
        obj = st.to_json()
        if provenance:
            obj['provenance'] = dict(sorted(st.provenance.items()))
        out.append(obj)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(out, f, indent=1, sort_keys=True)
        f.write('\n')


def read_alignments(path, sentences: Dict[str, AnnotatedSentence],
                    amrs: Dict[str, AMR]) -> List[AlignmentState]:
    with open(path, encoding='utf-8') as f:
        data = json.load(f)
    states = []
    for obj in data:
        sid = obj['id']
        if sid not in sentences or sid not in amrs:
            raise AlignmentError(f'alignment id {sid!r} missing from corpus or annotations')
        states.append(AlignmentState.from_json(obj, sentences[sid], amrs[sid]))
    return states
