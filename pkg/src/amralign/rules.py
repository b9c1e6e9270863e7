"""Deterministic pre-alignment rules, applied before the statistical phases.

Three rule groups: subgraph pre-alignment (token/lemma/prefix matching,
hand-written English rules, then graph expansion), relation pre-alignment
(structural role conventions plus token matching), and primary-edge
identification for reentrant nodes. Rules conditioned on uniqueness fire only
when the correspondence is unique in the sentence/graph pair, and every fired
alignment records its rule name as provenance.
"""

import re
from typing import List, Sequence, Tuple

from .amr import AMR, Edge, is_legal_subgraph, normalize_edge, reentrant_nodes
from .alignment import AlignmentState
from .annotations import AnnotatedSentence, Span

_SENSE_RE = re.compile(r'-\d+$')

MONTHS = {
    'january': 1, 'february': 2, 'march': 3, 'april': 4, 'may': 5, 'june': 6,
    'july': 7, 'august': 8, 'september': 9, 'october': 10, 'november': 11,
    'december': 12,
}

DECADES = {
    'twenties': 1920, 'thirties': 1930, 'forties': 1940, 'fifties': 1950,
    'sixties': 1960, 'seventies': 1970, 'eighties': 1980, 'nineties': 1990,
}

NUMBER_WORDS = {
    'zero': 0, 'one': 1, 'two': 2, 'three': 3, 'four': 4, 'five': 5, 'six': 6,
    'seven': 7, 'eight': 8, 'nine': 9, 'ten': 10, 'eleven': 11, 'twelve': 12,
    'thirteen': 13, 'fourteen': 14, 'fifteen': 15, 'sixteen': 16,
    'seventeen': 17, 'eighteen': 18, 'nineteen': 19, 'twenty': 20,
    'thirty': 30, 'forty': 40, 'fifty': 50, 'sixty': 60, 'seventy': 70,
    'eighty': 80, 'ninety': 90, 'hundred': 100, 'thousand': 1000,
    'million': 10 ** 6,
}

CURRENCIES = {'$': 'dollar', '€': 'euro', '£': 'pound', '¥': 'yen'}

ENGLISH_MATCH_RULES = [
    # (rule name, concept, matching span lemmas)
    ('and', 'and', {'and', '&', 'additionally', 'as-well', 'as-well-as', 'in-addition',
                    'plus'}),
    ('polarity', '-', {'not', "n't", 'no', 'none', 'never', 'neither', 'without',
                       'non', 'no-one'}),
    ('cause', 'cause-01', {'thus', 'since', 'because', 'cause', 'therefore', 'so',
                           'why', 'consequently', 'due-to', 'thanks-to'}),
    ('amr-unknown', 'amr-unknown', {'?', 'who', 'what', 'when', 'where', 'why',
                                    'how', 'which'}),
    ('person', 'person', {'person', 'people'}),
    ('rate-entity', 'rate-entity-91', {'per', 'every', 'daily', 'weekly', 'monthly',
                                       'annually', 'annual', 'yearly'}),
    ('include', 'include-91', {'of', 'out-of', 'include', 'including'}),
    ('instead-of', 'instead-of-91', {'instead', 'instead-of', 'rather'}),
    ('have-03', 'have-03', {'have', 'with', "'s"}),
    ('mean-01', 'mean-01', {':', ','}),
]

NEGATIVE_PREFIXES = ('un', 'in', 'non', 'im', 'ir')

PRONOUN_LEMMAS = {'i', 'me', 'my', 'mine', 'myself', 'you', 'your', 'yours',
                  'yourself', 'he', 'him', 'his', 'himself', 'she', 'her', 'hers',
                  'herself', 'it', 'its', 'itself', 'we', 'us', 'our', 'ours',
                  'ourselves', 'they', 'them', 'their', 'theirs', 'themselves'}


def concept_base(concept: str) -> str:
    """Concept label without a -NN sense suffix ('want-01' -> 'want')."""
    return _SENSE_RE.sub('', concept)


def _name_groups(amr: AMR) -> List[Tuple[str, List[str], str]]:
    """(name node, ordered op constant ids, surface string) per `name` node."""
    groups = []
    for n in amr.dfs_order():
        if amr.is_constant(n) or amr.nodes[n] != 'name':
            continue
        ops = sorted(((int(e.role[3:]), e.child) for e in amr.edges
                      if e.parent == n and e.role.startswith(':op') and e.role[3:].isdigit()))
        if ops:
            ids = [c for _, c in ops]
            label = ' '.join(amr.nodes[c].strip('"') for c in ids)
            groups.append((n, ids, label))
    return groups


def _unaligned_spans(state: AlignmentState) -> List[int]:
    return [i for i in range(len(state.spans)) if not state.subgraphs[i]]


def _unique(items):
    return items[0] if len(items) == 1 else None


# --- subgraph pre-alignment ----------------------------------------------

def prealign_subgraphs(sent: AnnotatedSentence, spans: Sequence[Span],
                       amr: AMR) -> AlignmentState:
    state = AlignmentState(sent, amr, spans)
    _match_exact_tokens(state)
    _match_exact_lemmas(state)
    _match_prefix_names(state)
    _match_prefix_lemmas(state)
    _match_english_rules(state)
    _expand_subgraphs(state)
    return state


def _match_exact_tokens(state: AlignmentState):
    """Unique full-string correspondence between a span and an AMR name or
    number."""
    amr = state.amr
    for name_node, op_ids, label in _name_groups(amr):
        if state.is_node_aligned(name_node) or any(state.is_node_aligned(c) for c in op_ids):
            continue
        others = [g for g in _name_groups(amr) if g[2] == label and not state.is_node_aligned(g[0])]
        matches = [i for i in _unaligned_spans(state) if state.text(i) == label]
        if len(others) == 1 and len(matches) == 1:
            state.align_subgraph(matches[0], [name_node] + op_ids, rule='rule:exact-token-name')
    for n in amr.dfs_order():
        if not amr.is_constant(n) or state.is_node_aligned(n):
            continue
        label = amr.nodes[n].strip('"')
        if not label or not label[0].isdigit():
            continue
        nodes = [m for m in amr.dfs_order() if amr.is_constant(m)
                 and amr.nodes[m].strip('"') == amr.nodes[n].strip('"')
                 and not state.is_node_aligned(m)]
        matches = [i for i in _unaligned_spans(state)
                   if state.text(i) == label or state.text(i).replace(',', '') == label]
        if len(nodes) == 1 and len(matches) == 1:
            state.align_subgraph(matches[0], [n], rule='rule:exact-token-number')


def _match_exact_lemmas(state: AlignmentState):
    """Unique correspondence between a concept and a span lemma (hyphen-joined
    for multiword spans); sense suffixes are ignored on the concept side."""
    amr = state.amr
    for n in amr.dfs_order():
        if amr.is_constant(n) or state.is_node_aligned(n):
            continue
        base = concept_base(amr.nodes[n]).lower()
        nodes = [m for m in amr.dfs_order() if not amr.is_constant(m)
                 and concept_base(amr.nodes[m]).lower() == base
                 and not state.is_node_aligned(m)]
        matches = [i for i in _unaligned_spans(state) if state.lemma(i) == base]
        if len(nodes) == 1 and len(matches) == 1:
            state.align_subgraph(matches[0], [n], rule='rule:exact-lemma')


def _match_prefix_names(state: AlignmentState):
    amr = state.amr
    for length in (6, 5, 4):
        for name_node, op_ids, label in _name_groups(amr):
            if state.is_node_aligned(name_node) or any(state.is_node_aligned(c) for c in op_ids):
                continue
            if len(label) < length:
                continue
            prefix = label[:length].lower()
            others = [g for g in _name_groups(amr)
                      if len(g[2]) >= length and g[2][:length].lower() == prefix
                      and not state.is_node_aligned(g[0])]
            matches = [i for i in _unaligned_spans(state)
                       if len(state.text(i)) >= length
                       and state.text(i)[:length].lower() == prefix]
            if len(others) == 1 and len(matches) == 1:
                state.align_subgraph(matches[0], [name_node] + op_ids,
                                     rule=f'rule:prefix-{length}-name')


def _match_prefix_lemmas(state: AlignmentState):
    amr = state.amr
    for length in (6, 5, 4):
        for n in amr.dfs_order():
            if amr.is_constant(n) or state.is_node_aligned(n):
                continue
            base = concept_base(amr.nodes[n]).lower()
            if len(base) < length:
                continue
            prefix = base[:length]
            nodes = [m for m in amr.dfs_order() if not amr.is_constant(m)
                     and not state.is_node_aligned(m)
                     and len(concept_base(amr.nodes[m])) >= length
                     and concept_base(amr.nodes[m]).lower()[:length] == prefix]
            matches = [i for i in _unaligned_spans(state)
                       if len(state.lemma(i)) >= length and state.lemma(i)[:length] == prefix]
            if len(nodes) == 1 and len(matches) == 1:
                state.align_subgraph(matches[0], [n], rule=f'rule:prefix-{length}-lemma')


def _match_english_rules(state: AlignmentState):
    amr = state.amr

    def unaligned_concept_nodes(concept):
        return [n for n in amr.dfs_order() if not state.is_node_aligned(n)
                and amr.nodes[n].strip('"') == concept
                and (not amr.is_constant(n) or concept == '-')]

    def align_unique(nodes, matches, rule):
        if len(nodes) == 1 and len(matches) == 1:
            state.align_subgraph(matches[0], nodes, rule=rule)
            return True
        return False

    # dates: month names, years/days, and decades attach to their
    # date-entity constants; a match on any token inside a span counts, so
    # merged spans like "June 2005" seed the date subgraph. Matches are
    # computed against a snapshot so one date alignment cannot make an
    # ambiguous constant (a repeated year, say) spuriously unique.
    date_spans = _unaligned_spans(state)
    for e in amr.edges:
        if amr.nodes.get(e.parent) != 'date-entity' or not amr.is_constant(e.child):
            continue
        if state.is_node_aligned(e.child):
            continue
        value = amr.nodes[e.child].strip('"')

        def token_match(tok):
            low = tok.lower()
            if e.role == ':month' and value.isdigit():
                return MONTHS.get(low) == int(value)
            if e.role in (':year', ':day'):
                return tok == value or tok.lstrip('0') == value
            if e.role == ':decade' and value.isdigit():
                return DECADES.get(low) == int(value)
            return False

        matches = [i for i in date_spans
                   if any(token_match(state.sent.tokens[t])
                          for t in state.spans[i].indices())]
        if all(not state.span_is_subgraph_aligned(i) for i in matches):
            align_unique([e.child], matches, f'rule:date-{e.role[1:]}')

    # spelled-out numbers
    for n in amr.dfs_order():
        if not amr.is_constant(n) or state.is_node_aligned(n):
            continue
        label = amr.nodes[n].strip('"')
        if not label.lstrip('-').isdigit():
            continue
        words = [w for w, v in NUMBER_WORDS.items() if str(v) == label]
        if not words:
            continue
        nodes = [m for m in amr.dfs_order() if amr.is_constant(m)
                 and amr.nodes[m].strip('"') == label and not state.is_node_aligned(m)]
        matches = [i for i in _unaligned_spans(state) if state.lemma(i) in words]
        align_unique(nodes if len(nodes) == 1 else [], matches, 'rule:number-word')

    # currencies
    for symbol, unit in CURRENCIES.items():
        nodes = unaligned_concept_nodes(unit)
        matches = [i for i in _unaligned_spans(state) if state.text(i) == symbol]
        align_unique(nodes, matches, 'rule:currency')

    # "never" covers both the polarity constant and an `ever` sibling
    never_spans = [i for i in _unaligned_spans(state) if state.lemma(i) == 'never']
    if len(never_spans) == 1:
        minus = unaligned_concept_nodes('-')
        ever = unaligned_concept_nodes('ever')
        if len(minus) == 1 and len(ever) == 1:
            parents_m = {normalize_edge(e).parent for e in amr.edges
                         if normalize_edge(e).child == minus[0]}
            parents_e = {normalize_edge(e).parent for e in amr.edges
                         if normalize_edge(e).child == ever[0]}
            if parents_m and parents_m == parents_e:
                state.align_subgraph(never_spans[0], [minus[0], ever[0]], rule='rule:never')

    for rule, concept, lemmas in ENGLISH_MATCH_RULES:
        nodes = unaligned_concept_nodes(concept)
        matches = [i for i in _unaligned_spans(state) if state.lemma(i) in lemmas]
        align_unique(nodes, matches, f'rule:english-{rule}')

    # multi-sentence: sentence-final punctuation never counts
    ms_nodes = unaligned_concept_nodes('multi-sentence')
    matches = [i for i in _unaligned_spans(state) if state.lemma(i) in {'.', ';', '!', '?'}]
    if matches and matches[-1] == len(state.spans) - 1:
        matches = matches[:-1]
    align_unique(ms_nodes, matches, 'rule:english-multi-sentence')

    # "United States" and variants
    for name_node, op_ids, label in _name_groups(amr):
        if state.is_node_aligned(name_node):
            continue
        ops = set(label.split())
        if ops not in ({'United', 'States'}, {'America'}, {'United', 'States', 'of', 'America'}):
            continue
        matches = [i for i in _unaligned_spans(state)
                   if any(state.sent.tokens[t].replace('.', '') in ('US', 'USA', 'America', 'American')
                          for t in state.spans[i].indices())]
        align_unique([name_node] + op_ids, matches, 'rule:united-states')

    # "how" matching ':manner thing' or ':degree so'
    how_spans = [i for i in _unaligned_spans(state) if state.lemma(i) == 'how']
    if len(how_spans) == 1:
        candidates = []
        for n in amr.dfs_order():
            if state.is_node_aligned(n) or amr.is_constant(n):
                continue
            if amr.nodes[n] == 'thing' and any(
                    normalize_edge(e).role == ':manner' and normalize_edge(e).child == n
                    for e in amr.edges):
                candidates.append(n)
            elif amr.nodes[n] == 'so' and any(
                    normalize_edge(e).role == ':degree' and normalize_edge(e).child == n
                    for e in amr.edges):
                candidates.append(n)
            elif amr.nodes[n] == 'have-manner-91':
                candidates.append(n)
        if len(candidates) == 1:
            state.align_subgraph(how_spans[0], [candidates[0]], rule='rule:how')

    # "as ... as" matching `equal`
    as_spans = [i for i in _unaligned_spans(state) if state.lemma(i) == 'as']
    equal_nodes = unaligned_concept_nodes('equal')
    if len(as_spans) == 2 and len(equal_nodes) == 1:
        state.align_subgraph(as_spans[0], equal_nodes, rule='rule:as-as')

    # negative prefixes: "unhappy" -> happy + :polarity -
    for i in _unaligned_spans(state):
        lemma = state.lemma(i)
        if len(state.spans[i]) != 1:
            continue
        for prefix in NEGATIVE_PREFIXES:
            if not lemma.startswith(prefix) or len(lemma) < len(prefix) + 3:
                continue
            rest = lemma[len(prefix):]
            candidates = []
            for n in amr.dfs_order():
                if amr.is_constant(n) or state.is_node_aligned(n):
                    continue
                if concept_base(amr.nodes[n]).lower()[:4] != rest[:4]:
                    continue
                minus = [e.child for e in amr.edges
                         if e.parent == n and e.role == ':polarity'
                         and amr.nodes[e.child] == '-' and not state.is_node_aligned(e.child)]
                if minus:
                    candidates.append((n, minus[0]))
            if len(candidates) == 1:
                n, minus = candidates[0]
                state.align_subgraph(i, [n, minus], rule='rule:negative-prefix')
                break


# Concepts whose attachments are notational and align as one unit.
def _expand_subgraphs(state: AlignmentState):
    """Grow aligned subgraphs to cover notational neighbors (named entities,
    date entities, quantities) and morphological neighbors (have-degree-91,
    possible-01, polarity, agentive person/thing)."""
    amr = state.amr
    changed = True
    while changed:
        changed = False
        for span_i, subs in enumerate(state.subgraphs):
            for sub_i, sub in enumerate(subs):
                add = _expansion_nodes(state, span_i, sub)
                for n in add:
                    if not state.is_node_aligned(n) and is_legal_subgraph(amr, set(sub) | {n}):
                        state.add_node(span_i, sub_i, n, rule='rule:expansion')
                        changed = True


def _expansion_nodes(state: AlignmentState, span_i: int, sub: List[str]) -> List[str]:
    amr = state.amr
    nodes = set(sub)
    tokens = [state.sent.tokens[t] for t in state.spans[span_i].indices()]
    last_token = tokens[-1].lower()
    add = []
    for e in amr.edges:
        p, r, c = e
        if c in nodes and p not in nodes and not state.is_node_aligned(p):
            label = amr.nodes[p]
            if label == 'name' and r.startswith(':op'):
                add.append(p)
            elif r == ':name':
                add.append(p)
            elif label == 'date-entity' and r != ':mod' and not r.endswith('-of'):
                add.append(p)
            elif label.endswith('-quantity') and r in (':quant', ':unit'):
                add.append(p)
            elif label.endswith('-entity') and r == ':value':
                add.append(p)
            elif label == 'have-degree-91' and r in (':ARG1', ':ARG2') \
                    and (last_token.endswith('est') or last_token.endswith('er')):
                add.append(p)
            elif label == 'possible-01' and (last_token.endswith('able') or last_token.endswith('ible')):
                add.append(p)
            elif label == 'person' and r == ':ARG0-of' \
                    and any(last_token.endswith(suf) for suf in ('er', 'or', 'ist')):
                add.append(p)
            elif label == 'thing' and r in (':ARG1-of', ':ARG2-of') \
                    and any(last_token.endswith(suf) for suf in ('ment', 'tion', 'sion')):
                add.append(p)
        elif p in nodes and c not in nodes and not state.is_node_aligned(c):
            label = amr.nodes[c]
            if amr.nodes[p] == 'name' and r.startswith(':op'):
                add.append(c)
            elif amr.nodes[p] == 'date-entity' and r != ':mod' and not r.endswith('-of'):
                add.append(c)
            elif amr.nodes[p].endswith('-quantity') and r in (':quant', ':unit') and amr.is_constant(c):
                add.append(c)
            elif amr.nodes[p] == 'have-degree-91' and r == ':ARG3' and label in ('more', 'most') \
                    and (last_token.endswith('est') or last_token.endswith('er')):
                add.append(c)
            elif label == 'possible-01' and r == ':ARG1-of' \
                    and (last_token.endswith('able') or last_token.endswith('ible')):
                add.append(c)
    return add


# --- relation pre-alignment ----------------------------------------------

_ARG_RE = re.compile(r'^:ARG\d+$')
_ARG_OF_RE = re.compile(r'^:ARG\d+-of$')
_OP_SNT_RE = re.compile(r'^:(op|snt)\d+$')
CHILD_SIDE_ROLES = {':name', ':polarity', ':li'}


def prealign_relations(state: AlignmentState) -> AlignmentState:
    """Apply the structural relation conventions plus token matching for
    :prep-X/:conj-X and :poss/:part. Edges internal to a subgraph alignment
    are excluded."""
    for e in state.unaligned_edges():
        role = e.role
        if _ARG_RE.match(role) or _OP_SNT_RE.match(role) or role == ':domain':
            span = state.span_of_node(e.parent)
            if span is not None:
                state.add_edge(span, e, rule='rule:relation-parent')
        elif _ARG_OF_RE.match(role):
            span = state.span_of_node(e.child)
            if span is not None:
                state.add_edge(span, e, rule='rule:relation-child')
        elif role in CHILD_SIDE_ROLES:
            span = state.span_of_node(e.child)
            if span is not None:
                state.add_edge(span, e, rule='rule:relation-child')
        elif role.startswith(':prep-') or role.startswith(':conj-'):
            word = role.split('-', 1)[1].replace('-', ' ')
            matches = [i for i in range(len(state.spans))
                       if not state.span_is_subgraph_aligned(i)
                       and not state.span_is_relation_aligned(i)
                       and state.text(i).lower() == word]
            if len(matches) == 1:
                state.add_edge(matches[0], e, rule='rule:prep-token')
        elif role in (':poss', ':part'):
            matches = [i for i in range(len(state.spans))
                       if not state.span_is_subgraph_aligned(i)
                       and not state.span_is_relation_aligned(i)
                       and state.lemma(i) in ("'s", 'of')]
            if len(matches) == 1:
                state.add_edge(matches[0], e, rule='rule:poss-token')
    return state


# --- primary-edge identification -----------------------------------------

def identify_primary_edges(state: AlignmentState) -> AlignmentState:
    """Choose the primary incoming edge of each reentrant node: prefer edges
    belonging to a span's argument structure; then shortest parent-child span
    distance; ties go to the leftmost parent span; final fallback is
    depth-first edge order."""
    for node, incoming in sorted(reentrant_nodes(state.amr).items()):
        incoming = sorted(incoming, key=state.amr.edges.index)
        qualifying = [e for e in incoming
                      if state.span_of_edge(e) is not None
                      and state.span_of_edge(e) == state.span_of_node(normalize_edge(e).parent)]
        pool = qualifying if qualifying else incoming

        def sort_key(e):
            ne = normalize_edge(e)
            sp = state.span_of_node(ne.parent)
            sc = state.span_of_node(ne.child)
            if sp is None or sc is None:
                dist = len(state.spans) + 1  # unaligned parents resolved last
                left = len(state.spans) + 1
            else:
                dist = abs(sp - sc)
                left = sp
            return (dist, left, state.amr.edges.index(e))

        primary = min(pool, key=sort_key)
        state.set_primary(node, primary)
    return state


def rule_coverage(state: AlignmentState) -> Tuple[float, float]:
    """(node coverage %, edge coverage %) of the current, rules-only state."""
    return state.node_coverage(), state.edge_coverage()
