"""AMR graphs: PENMAN parsing, serialization, and structural queries.

An AMR is stored as a rooted graph with a node dictionary and an ordered edge
list. Variable nodes carry a concept label; attribute constants (quoted
strings, numbers, `-`, etc.) are first-class nodes with generated ids so they
can participate in alignments. Edge order preserves the depth-first order of
the source PENMAN text.
"""

import re
from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple


class Edge(NamedTuple):
    parent: str
    role: str
    child: str


class AMRError(Exception):
    pass


class PenmanParseError(AMRError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class EmptyInputError(PenmanParseError):
    pass


class UnbalancedParensError(PenmanParseError):
    pass


class DuplicateConceptError(PenmanParseError):
    pass


class DanglingVariableError(PenmanParseError):
    pass


# Inverse roles that are not actually inversions and must be left alone.
UNTOUCHABLE_ROLES = {':consist-of', ':prep-on-behalf-of', ':prep-out-of'}

# Bare (unquoted) atoms that are attribute constants, not variable references.
CONSTANT_KEYWORDS = {'-', '+', 'imperative', 'expressive', 'interrogative'}

_VARIABLE_RE = re.compile(r'^[a-z][a-z]?[0-9]*$')
_NUMBER_RE = re.compile(r'^[+-]?\d+(\.\d+)?$')


class AMR:
    def __init__(self, id: str = '', root: str = '', nodes: Optional[Dict[str, str]] = None,
                 edges: Optional[List[Edge]] = None, constants: Optional[Set[str]] = None,
                 metadata: Optional[Dict[str, str]] = None):
        self.id = id
        self.root = root
        self.nodes = nodes if nodes is not None else {}
        self.edges = [Edge(*e) for e in edges] if edges is not None else []
        self.constants = constants if constants is not None else set()
        self.metadata = metadata if metadata is not None else {}

    def is_constant(self, n: str) -> bool:
        return n in self.constants

    def concept(self, n: str) -> str:
        return self.nodes[n]

    def variables(self) -> List[str]:
        return [n for n in self.nodes if n not in self.constants]

    def dfs_order(self) -> List[str]:
        """Node ids in the depth-first order of the source text (edge order)."""
        order = [self.root]
        seen = {self.root}
        for e in self.edges:
            for n in (e.parent, e.child):
                if n not in seen:
                    seen.add(n)
                    order.append(n)
        return order

    def __repr__(self):
        return f'AMR(id={self.id!r}, nodes={len(self.nodes)}, edges={len(self.edges)})'


def normalize_edge(edge: Edge) -> Edge:
    """Rewrite an inverse role ':X-of' as the forward edge ':X' with endpoints
    swapped. Roles in UNTOUCHABLE_ROLES are treated as atomic."""
    if edge.role.endswith('-of') and edge.role not in UNTOUCHABLE_ROLES:
        return Edge(edge.child, edge.role[:-len('-of')], edge.parent)
    return edge


class _Token(NamedTuple):
    kind: str  # 'lparen', 'rparen', 'slash', 'role', 'atom'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == '\n':
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch == '(':
            tokens.append(_Token('lparen', '(', line, start_col))
            i += 1
            col += 1
        elif ch == ')':
            tokens.append(_Token('rparen', ')', line, start_col))
            i += 1
            col += 1
        elif ch == '/':
            tokens.append(_Token('slash', '/', line, start_col))
            i += 1
            col += 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise PenmanParseError('unterminated string literal', line, start_col)
            tokens.append(_Token('atom', text[i:j + 1], line, start_col))
            col += j + 1 - i
            i = j + 1
        elif ch == ':':
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()':
                j += 1
            tokens.append(_Token('role', text[i:j], line, start_col))
            col += j - i
            i = j
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()/':
                j += 1
            tokens.append(_Token('atom', text[i:j], line, start_col))
            col += j - i
            i = j
    return tokens


def _split_metadata(text: str) -> Tuple[Dict[str, str], str, int]:
    """Strip `# ::key value` lines; returns (metadata, penman text, line offset)."""
    metadata = {}
    body_lines = []
    offset = 0
    in_body = False
    for lineno, line in enumerate(text.split('\n')):
        stripped = line.strip()
        if not in_body and stripped.startswith('#'):
            for m in re.finditer(r'::(\S+) ?((?:(?!::).)*)', stripped):
                metadata[m.group(1)] = m.group(2).strip()
            continue
        if not in_body and not stripped:
            continue
        if not in_body:
            in_body = True
            offset = lineno
        body_lines.append(line)
    return metadata, '\n'.join(body_lines), offset


def parse_penman(text: str, id: str = '') -> AMR:
    """Parse one PENMAN expression (optionally preceded by `# ::` metadata).

    Repeated mentions of a variable merge into a single node. Raises a
    distinct PenmanParseError subclass for unbalanced parentheses, duplicate
    concept assignment, dangling variable references, and empty input.
    """
    metadata, body, line_offset = _split_metadata(text)
    if not body.strip():
        raise EmptyInputError('empty input')
    tokens = _tokenize(body)
    # First pass: collect every variable that receives a concept, so bare
    # atoms can be classified as references vs. constants.
    defined = set()
    for k in range(len(tokens) - 2):
        if tokens[k].kind == 'lparen' and tokens[k + 1].kind == 'atom' and tokens[k + 2].kind == 'slash':
            defined.add(tokens[k + 1].text)

    amr = AMR(id=id or metadata.get('id', ''), metadata=metadata)
    const_count = 0
    pos = 0

    def error(cls, msg, tok=None):
        t = tok if tok is not None else (tokens[pos] if pos < len(tokens) else tokens[-1])
        return cls(msg, t.line + line_offset, t.col)

    def expect(kind):
        nonlocal pos
        if pos >= len(tokens):
            raise UnbalancedParensError(f'unexpected end of input, expected {kind}')
        if tokens[pos].kind != kind:
            raise error(PenmanParseError, f'expected {kind}, found {tokens[pos].text!r}')
        tok = tokens[pos]
        pos += 1
        return tok

    def new_constant(label):
        nonlocal const_count
        while f'x{const_count}' in amr.nodes:
            const_count += 1
        cid = f'x{const_count}'
        const_count += 1
        amr.nodes[cid] = label
        amr.constants.add(cid)
        return cid

    def parse_node():
        nonlocal pos
        expect('lparen')
        var_tok = expect('atom')
        var = var_tok.text
        if pos < len(tokens) and tokens[pos].kind == 'slash':
            pos += 1
            concept_tok = expect('atom')
            if var in amr.nodes and amr.nodes[var] is not None:
                raise error(DuplicateConceptError,
                            f'variable {var!r} already has concept {amr.nodes[var]!r}', concept_tok)
            amr.nodes[var] = concept_tok.text
        elif var not in defined:
            raise error(DanglingVariableError, f'variable {var!r} has no concept', var_tok)
        while pos < len(tokens) and tokens[pos].kind == 'role':
            role_tok = tokens[pos]
            pos += 1
            if pos >= len(tokens):
                raise UnbalancedParensError('unexpected end of input after role '
                                            + role_tok.text)
            if tokens[pos].kind == 'lparen':
                child = parse_node()
            elif tokens[pos].kind == 'atom':
                atom = tokens[pos]
                pos += 1
                if atom.text in defined:
                    child = atom.text
                elif (not atom.text.startswith('"') and atom.text not in CONSTANT_KEYWORDS
                      and not _NUMBER_RE.match(atom.text) and _VARIABLE_RE.match(atom.text)
                      and len(atom.text) <= 3):
                    raise error(DanglingVariableError,
                                f'reference to undefined variable {atom.text!r}', atom)
                else:
                    child = new_constant(atom.text)
            else:
                raise error(PenmanParseError,
                            f'expected node or value after role {role_tok.text}')
            amr.edges.append(Edge(var, role_tok.text, child))
        expect('rparen')
        return var

    amr.root = parse_node()
    if pos < len(tokens):
        raise error(UnbalancedParensError, f'unexpected trailing {tokens[pos].text!r}')
    for e in amr.edges:
        for n in (e.parent, e.child):
            if n not in amr.nodes:
                raise DanglingVariableError(f'variable {n!r} has no concept')
    if amr.root not in amr.nodes:
        raise DanglingVariableError(f'variable {amr.root!r} has no concept')
    return amr


def load_corpus(path) -> List[AMR]:
    """Read an AMR corpus file: blocks separated by blank lines, each with
    `# ::` metadata lines followed by a PENMAN expression."""
    with open(path, encoding='utf-8') as f:
        text = f.read()
    amrs = []
    for block in re.split(r'\n\s*\n', text):
        if not block.strip():
            continue
        if all(line.strip().startswith('#') or not line.strip() for line in block.split('\n')):
            continue  # header-only block (e.g. corpus preamble comments)
        amrs.append(parse_penman(block))
    return amrs


def serialize_penman(amr: AMR, indent: int = 4) -> str:
    """Serialize to PENMAN. Each variable's concept is printed at its first
    depth-first occurrence; later mentions print the bare variable."""
    children: Dict[str, List[Tuple[str, str]]] = {n: [] for n in amr.nodes}
    # Build a printable tree. Edges are kept in surface orientation; if a node
    # is only reachable against the stored direction (hand-built graphs), the
    # edge is printed inverted.
    placed: Set[int] = set()
    tree: Dict[str, List[Tuple[str, str, int]]] = {n: [] for n in amr.nodes}
    visited = {amr.root}
    frontier = True
    while frontier:
        frontier = False
        for i, e in enumerate(amr.edges):
            if i in placed:
                continue
            if e.parent in visited:
                tree[e.parent].append((e.role, e.child, i))
                visited.add(e.child)
                placed.add(i)
                frontier = True
            elif e.child in visited and e.parent not in visited:
                role = e.role[:-3] if (e.role.endswith('-of') and e.role not in UNTOUCHABLE_ROLES) else e.role + '-of'
                tree[e.child].append((role, e.parent, i))
                visited.add(e.parent)
                placed.add(i)
                frontier = True

    printed: Set[str] = set()

    def render(n: str, depth: int) -> str:
        if amr.is_constant(n):
            return amr.nodes[n]
        if n in printed:
            return n
        printed.add(n)
        parts = [f'({n} / {amr.nodes[n]}']
        pad = ' ' * (indent * (depth + 1))
        for role, child, _ in tree[n]:
            rendered = render(child, depth + 1)
            if rendered.startswith('('):
                parts.append(f'\n{pad}{role} {rendered}')
            else:
                parts.append(f'\n{pad}{role} {rendered}')
        return ''.join(parts) + ')'

    return render(amr.root, 0)


def reentrant_nodes(amr: AMR) -> Dict[str, List[Edge]]:
    """Nodes with >= 2 incoming edges after inverse-role normalization.
    Returns {node id: incoming edges (in surface orientation)}."""
    incoming: Dict[str, List[Edge]] = {}
    for e in amr.edges:
        ne = normalize_edge(e)
        incoming.setdefault(ne.child, []).append(e)
    return {n: es for n, es in incoming.items() if len(es) >= 2}


def _adjacency(amr: AMR) -> Dict[str, Set[str]]:
    adj: Dict[str, Set[str]] = {n: set() for n in amr.nodes}
    for e in amr.edges:
        adj[e.parent].add(e.child)
        adj[e.child].add(e.parent)
    return adj


def is_legal_subgraph(amr: AMR, nodes: Iterable[str]) -> bool:
    """True iff `nodes` induce a connected undirected subgraph, or consist of
    terminal children of one shared parent (optionally plus that parent)."""
    nodes = set(nodes)
    if not nodes:
        return False
    if len(nodes) == 1:
        return True
    adj = {n: set() for n in nodes}
    for e in amr.edges:
        if e.parent in nodes and e.child in nodes:
            adj[e.parent].add(e.child)
            adj[e.child].add(e.parent)
    stack = [next(iter(sorted(nodes)))]
    seen = set(stack)
    while stack:
        for m in adj[stack.pop()]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    if seen == nodes:
        return True
    # Exception: terminal nodes sharing a single parent (e.g. ":polarity -
    # :time ever" for "never"), optionally including that parent.
    parents = {n: {normalize_edge(e).parent for e in amr.edges if normalize_edge(e).child == n}
               for n in amr.nodes}
    children = {n: {normalize_edge(e).child for e in amr.edges if normalize_edge(e).parent == n}
                for n in amr.nodes}
    candidates = [p for p in amr.nodes if nodes - {p} and
                  all(n == p or (parents[n] == {p} and not children[n]) for n in nodes)]
    return bool(candidates)


def graph_neighbors(amr: AMR, nodes: Iterable[str]) -> Set[str]:
    """Nodes one edge away (either direction) from the set, excluding the set."""
    nodes = set(nodes)
    result = set()
    for e in amr.edges:
        if e.parent in nodes and e.child not in nodes:
            result.add(e.child)
        elif e.child in nodes and e.parent not in nodes:
            result.add(e.parent)
    return result


def canonical_form(amr: AMR) -> str:
    """A canonical string that is invariant under variable renaming, used for
    isomorphism checks in round-trip tests."""
    norm_children: Dict[str, List[Tuple[str, str]]] = {n: [] for n in amr.nodes}
    for e in amr.edges:
        ne = normalize_edge(e)
        norm_children[ne.parent].append((ne.role, ne.child))

    sig_memo: Dict[str, str] = {}

    def signature(n: str, path: frozenset) -> str:
        # path guards against cycles from role normalization oddities
        if n in sig_memo:
            return sig_memo[n]
        if n in path:
            return '<cycle>'
        subparts = sorted(f'{r}={signature(c, path | {n})}' for r, c in norm_children[n])
        sig = f'{amr.nodes[n]}({",".join(subparts)})'
        sig_memo[n] = sig
        return sig

    canon: Dict[str, str] = {}

    def assign(n: str):
        if n in canon:
            return
        canon[n] = f'n{len(canon)}'
        for r, c in sorted(norm_children[n], key=lambda rc: (rc[0], signature(rc[1], frozenset()))):
            assign(c)

    assign(amr.root)
    for n in amr.dfs_order():  # disconnected safety; normally a no-op
        assign(n)
    triples = sorted(f'{canon[ne.parent]} {ne.role} {canon[ne.child]}'
                     for ne in (normalize_edge(e) for e in amr.edges))
    labels = sorted(f'{canon[n]}={amr.nodes[n]}' for n in amr.nodes)
    return f'root={canon[amr.root]};' + ';'.join(labels) + '|' + ';'.join(triples)


def is_isomorphic(a: AMR, b: AMR) -> bool:
    return canonical_form(a) == canonical_form(b)
