import { describe, expect, it } from 'vitest';
import { extractCorpus, toJsonl } from '../src/extract';
import { formatViolations, validateJsonl } from '../src/validate';

const GOOD = JSON.stringify({
  id: 'v1', tokens: ['Hi', '.'], lemmas: ['hi', '.'], pos: ['UH', '.'],
  ner: [], coref: [],
});

describe('validateJsonl', () => {
  it('accepts a valid file', () => {
    expect(validateJsonl(GOOD + '\n')).toEqual([]);
    expect(formatViolations([])).toBe('0 violations\n');
  });

  it('accepts the extractor output end to end', () => {
    const records = extractCorpus([
      { id: 'e1', snt: 'Emma visited Paris .', tok: ['Emma', 'visited', 'Paris', '.'] },
      { id: 'e2', snt: 'The dog sleeps .', tok: ['The', 'dog', 'sleeps', '.'] },
    ], { coref: false });
    expect(validateJsonl(toJsonl(records))).toEqual([]);
  });

  it('flags a lemma length mismatch with line and id', () => {
    const bad = JSON.parse(GOOD);
    bad.id = 'v2';
    bad.lemmas = ['hi'];
    const violations = validateJsonl(GOOD + '\n' + JSON.stringify(bad) + '\n');
    expect(violations).toHaveLength(1);
    expect(violations[0].line).toBe(2);
    expect(violations[0].id).toBe('v2');
    expect(violations[0].message).toMatch(/lemmas/);
  });

  it('flags duplicate ids', () => {
    const violations = validateJsonl(GOOD + '\n' + GOOD + '\n');
    expect(violations.some((v) => /duplicate/.test(v.message))).toBe(true);
  });

  it('flags invalid JSON and keeps going', () => {
    const violations = validateJsonl('{oops\n' + GOOD + '\n');
    expect(violations).toHaveLength(1);
    expect(violations[0].line).toBe(1);
  });

  it('flags out-of-range and overlapping NER spans', () => {
    const bad = JSON.parse(GOOD);
    bad.ner = [[0, 9, 'X']];
    expect(validateJsonl(JSON.stringify(bad) + '\n')[0].message).toMatch(/range/);
    bad.ner = [[0, 2, 'X'], [1, 2, 'Y']];
    expect(validateJsonl(JSON.stringify(bad) + '\n')[0].message).toMatch(/overlap/);
  });

  it('flags bad coref mentions', () => {
    const bad = JSON.parse(GOOD);
    bad.coref = [[[0, 5]]];
    expect(validateJsonl(JSON.stringify(bad) + '\n')[0].message).toMatch(/coref/);
  });
});
