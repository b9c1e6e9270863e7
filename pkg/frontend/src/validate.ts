/** Schema validation for annotation JSONL files.
 *
 * The checks mirror what the aligner enforces on load: required fields,
 * per-token array lengths, in-range non-overlapping NER spans, in-range
 * coreference mentions, unique ids.
 */

export interface Violation {
  line: number;
  id: string | null;
  message: string;
}

function isStringArray(x: unknown): x is string[] {
  return Array.isArray(x) && x.every((v) => typeof v === 'string');
}

export function validateJsonl(text: string): Violation[] {
  const violations: Violation[] = [];
  const seen = new Set<string>();
  const lines = text.split('\n');
  for (let lineno = 1; lineno <= lines.length; lineno++) {
    const line = lines[lineno - 1];
    if (!line.trim()) continue;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      violations.push({ line: lineno, id: null, message: `invalid JSON: ${String(err)}` });
      continue;
    }
    const id = typeof obj.id === 'string' ? obj.id : null;
    const bad = (message: string) => violations.push({ line: lineno, id, message });

    if (id === null) {
      bad('missing or non-string "id"');
      continue;
    }
    if (seen.has(id)) bad(`duplicate id ${id}`);
    seen.add(id);

    if (!isStringArray(obj.tokens) || obj.tokens.length === 0) {
      bad('missing or empty "tokens"');
      continue;
    }
    const n = obj.tokens.length;
    for (const field of ['lemmas', 'pos'] as const) {
      const value = obj[field];
      if (!isStringArray(value)) bad(`missing or non-string-array "${field}"`);
      else if (value.length !== n) bad(`${value.length} ${field} for ${n} tokens`);
    }

    const ner = Array.isArray(obj.ner) ? obj.ner : (bad('missing "ner"'), []);
    const spans: [number, number][] = [];
    for (const entry of ner) {
      if (!Array.isArray(entry) || entry.length !== 3 ||
          typeof entry[0] !== 'number' || typeof entry[1] !== 'number' ||
          typeof entry[2] !== 'string') {
        bad(`malformed NER entry ${JSON.stringify(entry)}`);
        continue;
      }
      const [s, e] = entry;
      if (!(s >= 0 && s < e && e <= n)) bad(`NER span (${s},${e}) out of range`);
      else spans.push([s, e]);
    }
    spans.sort((a, b) => a[0] - b[0]);
    for (let i = 1; i < spans.length; i++) {
      if (spans[i][0] < spans[i - 1][1]) bad('overlapping NER spans');
    }

    const coref = Array.isArray(obj.coref) ? obj.coref : (bad('missing "coref"'), []);
    for (const chain of coref) {
      if (!Array.isArray(chain)) {
        bad('malformed coref chain');
        continue;
      }
      for (const mention of chain) {
        if (!Array.isArray(mention) || mention.length !== 2 ||
            typeof mention[0] !== 'number' || typeof mention[1] !== 'number' ||
            !(mention[0] >= 0 && mention[0] < mention[1] && mention[1] <= n)) {
          bad(`coref mention ${JSON.stringify(mention)} out of range`);
        }
      }
    }
  }
  return violations;
}

export function formatViolations(violations: Violation[]): string {
  if (violations.length === 0) return '0 violations\n';
  const body = violations
    .map((v) => `line ${v.line}${v.id ? ` (${v.id})` : ''}: ${v.message}`)
    .join('\n');
  return `${body}\n${violations.length} violation${violations.length === 1 ? '' : 's'}\n`;
}
