#!/usr/bin/env node
/** Command line entry point.
 *
 *   extract --amr <path> --out <path> [--no-coref]
 *   validate <path>
 *
 * Exit codes: 0 success, 1 data error or validation failure, 2 usage error.
 */

import * as fs from 'fs';
import { parseCorpus } from './corpus';
import { extractCorpus, toJsonl } from './extract';
import { formatViolations, validateJsonl } from './validate';

function usage(): number {
  process.stderr.write(
    'usage: anno-extractor extract --amr <path> --out <path> [--no-coref]\n' +
    '       anno-extractor validate <path>\n');
  return 2;
}

function cmdExtract(argv: string[]): number {
  let amr: string | null = null;
  let out: string | null = null;
  let coref = true;
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case '--amr':
        amr = argv[++i];
        break;
      case '--out':
        out = argv[++i];
        break;
      case '--no-coref':
        coref = false;
        break;
      default:
        process.stderr.write(`unknown option ${argv[i]}\n`);
        return usage();
    }
  }
  if (!amr || !out) return usage();

  let text: string;
  try {
    text = fs.readFileSync(amr, 'utf-8');
  } catch (err) {
    process.stderr.write(`error: cannot read ${amr}: ${String(err)}\n`);
    return 1;
  }
  let records;
  try {
    const sentences = parseCorpus(text);
    records = extractCorpus(sentences, {
      coref,
      warn: (m) => process.stderr.write(`warning: ${m}\n`),
    });
  } catch (err) {
    process.stderr.write(`error: ${String(err)}\n`);
    return 1;
  }
  fs.writeFileSync(out, toJsonl(records));
  process.stderr.write(`wrote ${records.length} records to ${out}\n`);
  return 0;
}

function cmdValidate(argv: string[]): number {
  if (argv.length !== 1) return usage();
  let text: string;
  try {
    text = fs.readFileSync(argv[0], 'utf-8');
  } catch (err) {
    process.stderr.write(`error: cannot read ${argv[0]}: ${String(err)}\n`);
    return 1;
  }
  const violations = validateJsonl(text);
  process.stdout.write(formatViolations(violations));
  return violations.length === 0 ? 0 : 1;
}

function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === 'extract') return cmdExtract(rest);
  if (command === 'validate') return cmdValidate(rest);
  return usage();
}

process.exit(main(process.argv.slice(2)));
