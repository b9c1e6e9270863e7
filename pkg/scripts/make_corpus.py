#!/usr/bin/env python3
"""Generate the bundled fixture corpus (data/corpus.amr + data/corpus.jsonl).

Deterministic: a fixed seed cycles sentence templates over a small vocabulary,
emitting matched AMR blocks and annotation records. Re-run to regenerate the
checked-in files; output is byte-stable.
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, '..', 'data')

NOUNS = ['boy', 'girl', 'man', 'woman', 'dog', 'cat', 'king', 'queen',
         'teacher', 'farmer', 'pilot', 'sailor', 'child', 'bird', 'fox',
         'sheep', 'rose', 'planet', 'desert', 'star', 'snake', 'lamp',
         'mountain', 'river', 'garden', 'house', 'school', 'village']
TRANS = ['see', 'love', 'find', 'help', 'visit', 'watch', 'follow', 'teach',
         'draw', 'paint', 'chase', 'greet', 'trust', 'admire']
INTRANS = ['sleep', 'laugh', 'cry', 'travel', 'arrive', 'graduate', 'sing',
           'dance', 'wait', 'smile']
ADJS = ['happy', 'sad', 'small', 'tall', 'proud', 'quiet', 'brave', 'gentle']
PERSON_NAMES = ['Alice', 'Bob', 'Clara', 'David', 'Emma', 'Frank', 'Grace', 'Henry']
CITY_NAMES = ['Paris', 'London', 'Boston', 'Madrid', 'Tokyo', 'Cairo']
MONTHS = [('January', 1), ('April', 4), ('June', 6), ('October', 10)]
DRINKS = ['tea', 'coffee', 'water', 'milk']

IRREGULAR_3SG = {'see': 'sees', 'love': 'loves', 'find': 'finds', 'help': 'helps',
                 'visit': 'visits', 'watch': 'watches', 'follow': 'follows',
                 'teach': 'teaches', 'draw': 'draws', 'paint': 'paints',
                 'chase': 'chases', 'greet': 'greets', 'trust': 'trusts',
                 'admire': 'admires', 'sleep': 'sleeps', 'laugh': 'laughs',
                 'cry': 'cries', 'travel': 'travels', 'arrive': 'arrives',
                 'graduate': 'graduates', 'sing': 'sings', 'dance': 'dances',
                 'wait': 'waits', 'smile': 'smiles', 'want': 'wants'}

PLURAL = {'boy': 'boys', 'girl': 'girls', 'man': 'men', 'woman': 'women',
          'dog': 'dogs', 'cat': 'cats', 'king': 'kings', 'queen': 'queens',
          'teacher': 'teachers', 'farmer': 'farmers', 'pilot': 'pilots',
          'sailor': 'sailors', 'child': 'children', 'bird': 'birds',
          'fox': 'foxes', 'sheep': 'sheep', 'rose': 'roses', 'planet': 'planets',
          'desert': 'deserts', 'star': 'stars', 'snake': 'snakes',
          'lamp': 'lamps', 'mountain': 'mountains', 'river': 'rivers',
          'garden': 'gardens', 'house': 'houses', 'school': 'schools',
          'village': 'villages'}


class Sent:
    def __init__(self):
        self.tokens, self.lemmas, self.pos = [], [], []
        self.ner, self.coref = [], []

    def add(self, token, lemma, pos):
        self.tokens.append(token)
        self.lemmas.append(lemma)
        self.pos.append(pos)
        return len(self.tokens) - 1


def t_transitive(rng, s):
    n1, n2 = rng.sample(NOUNS, 2)
    v = rng.choice(TRANS)
    s.add('The', 'the', 'DT'); s.add(n1, n1, 'NN')
    s.add(IRREGULAR_3SG[v], v, 'VBZ')
    s.add('the', 'the', 'DT'); s.add(n2, n2, 'NN'); s.add('.', '.', '.')
    return (f'(v / {v}-01 :ARG0 (a / {n1}) :ARG1 (b / {n2}))')


def t_control(rng, s):
    n = rng.choice(NOUNS)
    v = rng.choice(INTRANS)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add('wants', 'want', 'VBZ'); s.add('to', 'to', 'TO')
    s.add(v, v, 'VB'); s.add('.', '.', '.')
    return (f'(w / want-01 :ARG0 (a / {n}) '
            f':ARG1 (v / {v}-01 :ARG0 a))')


def t_named(rng, s):
    p = rng.choice(PERSON_NAMES)
    c = rng.choice(CITY_NAMES)
    i = s.add(p, p, 'NNP')
    s.ner.append([i, i + 1, 'PERSON'])
    s.add('visits', 'visit', 'VBZ')
    j = s.add(c, c, 'NNP')
    s.ner.append([j, j + 1, 'GPE'])
    s.add('.', '.', '.')
    return (f'(v / visit-01 :ARG0 (p / person :name (n / name :op1 "{p}")) '
            f':ARG1 (c / city :name (n2 / name :op1 "{c}")))')


def t_negation(rng, s):
    n = rng.choice(NOUNS)
    v = rng.choice(INTRANS)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add('does', 'do', 'VBZ'); s.add('not', 'not', 'RB')
    s.add(v, v, 'VB'); s.add('.', '.', '.')
    return f'(v / {v}-01 :polarity - :ARG0 (a / {n}))'


def t_coordination(rng, s):
    n = rng.choice(NOUNS)
    v1, v2 = rng.sample(INTRANS, 2)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add(IRREGULAR_3SG[v1], v1, 'VBZ'); s.add('and', 'and', 'CC')
    s.add(IRREGULAR_3SG[v2], v2, 'VBZ'); s.add('.', '.', '.')
    return (f'(x / and :op1 (v1 / {v1}-01 :ARG0 (a / {n})) '
            f':op2 (v2 / {v2}-01 :ARG0 a))')


def t_locative(rng, s):
    n, place = rng.sample(NOUNS, 2)
    v = rng.choice(INTRANS)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add(IRREGULAR_3SG[v], v, 'VBZ'); s.add('in', 'in', 'IN')
    s.add('the', 'the', 'DT'); s.add(place, place, 'NN'); s.add('.', '.', '.')
    return (f'(v / {v}-01 :ARG0 (a / {n}) :location (p / {place}))')


def t_coref(rng, s):
    n = rng.choice(['man', 'boy', 'king', 'farmer', 'pilot', 'sailor'])
    v1, v2 = rng.sample(INTRANS, 2)
    i0 = s.add('The', 'the', 'DT'); i1 = s.add(n, n, 'NN')
    s.add(IRREGULAR_3SG[v1], v1, 'VBZ'); s.add('when', 'when', 'WRB')
    j = s.add('he', 'he', 'PRP')
    s.add(IRREGULAR_3SG[v2], v2, 'VBZ'); s.add('.', '.', '.')
    s.coref.append([[i0, i1 + 1], [j, j + 1]])
    return (f'(v1 / {v1}-01 :ARG0 (a / {n}) '
            f':time (v2 / {v2}-01 :ARG0 a))')


def t_copula(rng, s):
    n = rng.choice(NOUNS)
    adj = rng.choice(ADJS)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add('is', 'be', 'VBZ'); s.add(adj, adj, 'JJ'); s.add('.', '.', '.')
    return f'(x / {adj} :domain (a / {n}))'


def t_ellipsis(rng, s):
    n1, n2 = rng.sample(NOUNS, 2)
    d1, d2 = rng.sample(DRINKS, 2)
    s.add('The', 'the', 'DT'); s.add(n1, n1, 'NN')
    s.add('wants', 'want', 'VBZ'); s.add(d1, d1, 'NN')
    s.add('and', 'and', 'CC')
    s.add('the', 'the', 'DT'); s.add(n2, n2, 'NN')
    s.add(d2, d2, 'NN'); s.add('.', '.', '.')
    return (f'(x / and '
            f':op1 (w1 / want-01 :ARG0 (a / {n1}) :ARG1 (t1 / {d1})) '
            f':op2 (w2 / want-01 :ARG0 (b / {n2}) :ARG1 (t2 / {d2})))')


def t_wanting(rng, s):
    # plain counterpart of the gapped clauses: the drinks and "wants" also
    # occur outside the ellipsis construction
    n = rng.choice(NOUNS)
    d = rng.choice(DRINKS)
    s.add('The', 'the', 'DT'); s.add(n, n, 'NN')
    s.add('wants', 'want', 'VBZ'); s.add(d, d, 'NN'); s.add('.', '.', '.')
    return f'(w / want-01 :ARG0 (a / {n}) :ARG1 (t / {d}))'


def t_quantity(rng, s):
    k = rng.choice([2, 3, 4, 5, 7])
    n = rng.choice(NOUNS)
    v = rng.choice(INTRANS)
    s.add(str(k), str(k), 'CD'); s.add(PLURAL[n], n, 'NNS')
    s.add(v, v, 'VBP'); s.add('.', '.', '.')
    return f'(v / {v}-01 :ARG0 (a / {n} :quant {k}))'


def t_possessive(rng, s):
    n1, n2 = rng.sample(NOUNS, 2)
    v = rng.choice(INTRANS)
    s.add('The', 'the', 'DT'); s.add(n1, n1, 'NN')
    s.add("'s", "'s", 'POS'); s.add(n2, n2, 'NN')
    s.add(IRREGULAR_3SG[v], v, 'VBZ'); s.add('.', '.', '.')
    return f'(v / {v}-01 :ARG0 (b / {n2} :poss (a / {n1})))'


def t_date(rng, s):
    p = rng.choice(PERSON_NAMES)
    v = rng.choice(INTRANS)
    month, mnum = rng.choice(MONTHS)
    year = rng.choice([1998, 2005, 2014, 2021])
    i = s.add(p, p, 'NNP')
    s.ner.append([i, i + 1, 'PERSON'])
    s.add(IRREGULAR_3SG[v], v, 'VBZ'); s.add('in', 'in', 'IN')
    j = s.add(month, month, 'NNP')
    s.add(str(year), str(year), 'CD')
    s.ner.append([j, j + 2, 'DATE'])
    s.add('.', '.', '.')
    return (f'(v / {v}-01 :ARG0 (p / person :name (n / name :op1 "{p}")) '
            f':time (d / date-entity :month {mnum} :year {year}))')


def t_obj_control(rng, s):
    n1, n2 = rng.sample(NOUNS, 2)
    v = rng.choice(INTRANS)
    s.add('The', 'the', 'DT'); s.add(n1, n1, 'NN')
    s.add('helps', 'help', 'VBZ')
    s.add('the', 'the', 'DT'); s.add(n2, n2, 'NN')
    s.add(v, v, 'VB'); s.add('.', '.', '.')
    return (f'(h / help-01 :ARG0 (a / {n1}) :ARG1 (b / {n2}) '
            f':ARG2 (v / {v}-01 :ARG0 b))')


TEMPLATES = [t_transitive, t_control, t_named, t_negation, t_coordination,
             t_locative, t_coref, t_copula, t_ellipsis, t_quantity,
             t_possessive, t_date, t_obj_control, t_wanting,
             # weight the mix toward argument-heavy clauses
             t_transitive, t_control, t_obj_control, t_wanting]


def detok(tokens):
    out = ''
    for t in tokens:
        if t in ('.', ',', "'s") or not out:
            out += t
        else:
            out += ' ' + t
    return out


def main(n_sentences=312, seed=20240601):
    rng = random.Random(seed)
    os.makedirs(DATA, exist_ok=True)
    amr_path = os.path.join(DATA, 'corpus.amr')
    anno_path = os.path.join(DATA, 'corpus.jsonl')
    with open(amr_path, 'w', encoding='utf-8') as famr, \
            open(anno_path, 'w', encoding='utf-8') as fanno:
        for i in range(n_sentences):
            template = TEMPLATES[i % len(TEMPLATES)]
            s = Sent()
            graph = template(rng, s)
            sid = f'gen_{i:04d}'
            famr.write(f'# ::id {sid}\n')
            famr.write(f'# ::snt {detok(s.tokens)}\n')
            famr.write(f'# ::tok {" ".join(s.tokens)}\n')
            famr.write(graph + '\n\n')
            fanno.write(json.dumps({
                'id': sid, 'tokens': s.tokens, 'lemmas': s.lemmas,
                'pos': s.pos, 'ner': s.ner, 'coref': s.coref,
            }) + '\n')
    print(f'wrote {n_sentences} sentences to {amr_path} and {anno_path}')


if __name__ == '__main__':
    main()
