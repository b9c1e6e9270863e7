/** Annotation extraction: tokens, lemmas, Penn POS tags, NER spans and
 * (empty) coreference chains, one JSONL record per sentence.
 *
 * When a corpus carries `# ::tok`, that tokenization is authoritative: the
 * tagger runs on the same text and its output is projected onto the given
 * tokens by character overlap.
 */

import winkNLP, { ItemEntity, ItemToken } from 'wink-nlp';
import model from 'wink-eng-lite-web-model';
import { CorpusSentence } from './corpus';

export interface AnnotationRecord {
  id: string;
  tokens: string[];
  lemmas: string[];
  pos: string[];
  ner: [number, number, string][];
  coref: [number, number][][];
}

export interface ExtractOptions {
  coref?: boolean;
  warn?: (message: string) => void;
}

const nlp = winkNLP(model);
// the model's helper signatures take ModelAddons, which the token/entity
// `.out` overloads do not accept verbatim
// eslint-disable-next-line @typescript-eslint/no-explicit-any
const its = nlp.its as any;

const POSSESSIVE_PRONOUNS = new Set(['my', 'your', 'his', 'her', 'its', 'our',
  'their', 'whose']);
const WH_ADVERBS = new Set(['when', 'where', 'why', 'how']);
const WH_PRONOUNS = new Set(['who', 'whom', 'what', 'which']);
const PENN_PUNCT = new Set(['.', ',', ':', ';', '``', "''", '-LRB-', '-RRB-']);

/** Map a universal POS tag plus token shape to a Penn treebank label. */
export function toPennTag(upos: string, token: string, lemma: string): string {
  const low = token.toLowerCase();
  switch (upos) {
    case 'PUNCT':
      return PENN_PUNCT.has(token) ? token : '.';
    case 'ADP':
    case 'SCONJ':
      return 'IN';
    case 'PART':
      if (low === 'to') return 'TO';
      if (low === "'s" || low === "'") return 'POS';
      if (low === 'not' || low === "n't") return 'RB';
      return 'RP';
    case 'DET':
      return 'DT';
    case 'CCONJ':
      return 'CC';
    case 'NUM':
      return 'CD';
    case 'INTJ':
      return 'UH';
    case 'SYM':
      return 'SYM';
    case 'PRON':
      if (POSSESSIVE_PRONOUNS.has(low)) return 'PRP$';
      if (WH_PRONOUNS.has(low)) return 'WP';
      return 'PRP';
    case 'ADV':
      return WH_ADVERBS.has(low) ? 'WRB' : 'RB';
    case 'ADJ':
      if (low.endsWith('est') || low === 'most' || low === 'least') return 'JJS';
      if (low === 'more' || low === 'less' || low === 'better' || low === 'worse') return 'JJR';
      return 'JJ';
    case 'PROPN':
      return 'NNP';
    case 'NOUN':
      return low.endsWith('s') && !low.endsWith('ss') ? 'NNS' : 'NN';
    case 'AUX':
    case 'VERB':
      if (low === lemma.toLowerCase()) return 'VB';
      if (low.endsWith('ing')) return 'VBG';
      if (low.endsWith('ed')) return 'VBD';
      if (low.endsWith('s')) return 'VBZ';
      return 'VBD';
    default:
      return 'FW';
  }
}

interface TaggedToken {
  text: string;
  lemma: string;
  upos: string;
  start: number; // character range in the analyzed text
  end: number;
  entity: string | null; // entity type covering this token, if any
}

function runTagger(text: string): TaggedToken[] {
  const doc = nlp.readDoc(text);
  const tagged: TaggedToken[] = [];
  let cursor = 0;
  doc.tokens().each((t: ItemToken) => {
    const surface = t.out();
    const start = text.indexOf(surface, cursor);
    const safeStart = start >= 0 ? start : cursor;
    tagged.push({
      text: surface,
      lemma: t.out(its.lemma),
      upos: t.out(its.pos),
      start: safeStart,
      end: safeStart + surface.length,
      entity: null,
    });
    cursor = safeStart + surface.length;
  });
  doc.entities().each((e: ItemEntity) => {
    const [a, b] = e.out(its.span) as unknown as [number, number];
    const label = (e.out(its.type) as string).toUpperCase();
    for (let i = a; i <= b && i < tagged.length; i++) tagged[i].entity = label;
  });
  return tagged;
}

function overlap(aStart: number, aEnd: number, bStart: number, bEnd: number): number {
  return Math.max(0, Math.min(aEnd, bEnd) - Math.max(aStart, bStart));
}

/** Extract one record, projecting tagger output onto the given tokens. */
export function extractSentence(id: string, tokens: string[]): AnnotationRecord {
  const text = tokens.join(' ');
  const ranges: [number, number][] = [];
  let pos = 0;
  for (const tok of tokens) {
    ranges.push([pos, pos + tok.length]);
    pos += tok.length + 1;
  }

  const tagged = runTagger(text);
  const lemmas: string[] = [];
  const penn: string[] = [];
  const entityAt: (string | null)[] = [];
  for (let i = 0; i < tokens.length; i++) {
    const [s, e] = ranges[i];
    let best: TaggedToken | null = null;
    let bestOverlap = 0;
    for (const t of tagged) {
      const o = overlap(s, e, t.start, t.end);
      if (o > bestOverlap) {
        best = t;
        bestOverlap = o;
      }
    }
    if (best === null) {
      lemmas.push(tokens[i].toLowerCase());
      penn.push('NN');
      entityAt.push(null);
    } else {
      lemmas.push(best.lemma);
      penn.push(toPennTag(best.upos, tokens[i], best.lemma));
      entityAt.push(best.entity);
    }
  }

  // contiguous runs of the same entity type become NER spans
  const ner: [number, number, string][] = [];
  let i = 0;
  while (i < tokens.length) {
    const label = entityAt[i];
    if (label === null) {
      i++;
      continue;
    }
    let j = i + 1;
    while (j < tokens.length && entityAt[j] === label) j++;
    ner.push([i, j, label]);
    i = j;
  }
  // proper-noun runs the model's entity list missed (names of people and
  // places; the lite model only detects dates, quantities and the like)
  i = 0;
  while (i < tokens.length) {
    if (penn[i] !== 'NNP' || entityAt[i] !== null) {
      i++;
      continue;
    }
    let j = i + 1;
    while (j < tokens.length && penn[j] === 'NNP' && entityAt[j] === null) j++;
    ner.push([i, j, 'ENTITY']);
    i = j;
  }
  ner.sort((a, b) => a[0] - b[0]);

  return { id, tokens, lemmas, pos: penn, ner, coref: [] };
}

export function extractCorpus(sentences: CorpusSentence[],
                              options: ExtractOptions = {}): AnnotationRecord[] {
  const warn = options.warn ?? (() => undefined);
  if (options.coref !== false) {
    warn('no coreference component is available; emitting empty chains');
  }
  const records: AnnotationRecord[] = [];
  for (const sent of sentences) {
    const tokens = sent.tok ?? tokenize(sent.snt);
    try {
      records.push(extractSentence(sent.id, tokens));
    } catch (err) {
      // degrade per sentence rather than aborting the whole run
      warn(`${sent.id}: extraction failed (${String(err)}); emitting bare record`);
      records.push({
        id: sent.id,
        tokens,
        lemmas: tokens.map((t) => t.toLowerCase()),
        pos: tokens.map(() => 'NN'),
        ner: [],
        coref: [],
      });
    }
  }
  return records;
}

/** Fallback tokenizer for corpora without `# ::tok` lines. */
export function tokenize(text: string): string[] {
  const doc = nlp.readDoc(text);
  const tokens: string[] = [];
  doc.tokens().each((t: ItemToken) => tokens.push(t.out()));
  return tokens;
}

export function toJsonl(records: AnnotationRecord[]): string {
  return records.map((r) => JSON.stringify(r)).join('\n') + '\n';
}
