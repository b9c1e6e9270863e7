"""Command line interface.

Subcommands: train (hard-EM training, writes a model file), align (decode a
corpus with a trained model, or rules only), eval (score predictions against
gold alignments; writes a delimited report, a JSON report, and figures), and
inspect (pretty-print the alignments of one sentence).

Exit codes: 0 success, 1 data/model error, 2 usage error.
"""

import argparse
import logging
import os
import sys

from .amr import AMRError, load_corpus
from .annotations import AnnotationError, load_annotations
from .alignment import AlignmentError, read_alignments, write_alignments
from .evaluate import LAYERS, evaluate, format_report, report_tsv, write_report_json
from .models import ModelError, load_model, save_model
from .train import (PHASES, TrainConfig, align_corpus, pair_corpus,
                    prealign_corpus, train)

log = logging.getLogger('amralign')


def _add_corpus_args(p):
    p.add_argument('--amr', required=True, help='AMR corpus file')
    p.add_argument('--anno', required=True, help='annotation sidecar (JSONL)')


def _phases(text):
    phases = tuple(s.strip() for s in text.split(',') if s.strip())
    for ph in phases:
        if ph not in PHASES:
            raise argparse.ArgumentTypeError(
                f'unknown phase {ph!r}; choose from {", ".join(PHASES)}')
    return phases


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='amralign',
                                 description='Align AMR graphs to sentence spans.')
    sub = ap.add_subparsers(dest='command', required=True)

    p = sub.add_parser('train', help='train alignment models with hard EM')
    _add_corpus_args(p)
    p.add_argument('--model', required=True, help='output model file (JSON)')
    p.add_argument('--out', help='also write the training alignments here')
    p.add_argument('--phases', type=_phases, default=PHASES,
                   help='comma-separated subset of: ' + ','.join(PHASES))
    p.add_argument('--lambda-dup', type=float, default=0.1,
                   help='duplicate-subgraph penalty')
    p.add_argument('--lambda-backoff', type=float, default=0.1,
                   help='unseen-subgraph backoff weight')
    p.add_argument('--max-iter', type=int, default=10,
                   help='EM iteration cap per phase')
    p.add_argument('--jobs', type=int, default=1, help='parallel workers')
    p.add_argument('--no-distance', action='store_true',
                   help='disable the projection-distance model')
    p.add_argument('--no-inductive-bias', action='store_true',
                   help='disable the co-occurrence inductive bias')

    p = sub.add_parser('align', help='decode alignments for a corpus')
    _add_corpus_args(p)
    p.add_argument('--model', help='trained model file (JSON)')
    p.add_argument('--out', required=True, help='output alignment file (JSON)')
    p.add_argument('--phases', type=_phases, default=PHASES)
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--rules-only', action='store_true',
                   help='rule pre-alignment only; output includes provenance')

    p = sub.add_parser('eval', help='score predicted against gold alignments')
    _add_corpus_args(p)
    p.add_argument('--gold', required=True, help='gold alignment file (JSON)')
    p.add_argument('--pred', required=True, help='predicted alignment file (JSON)')
    p.add_argument('--out', help='report file (tab-delimited); JSON report and '
                                 'figures are written alongside')
    p.add_argument('--layer', choices=LAYERS, help='print only this layer')
    p.add_argument('--breakdown', action='store_true',
                   help='include relation and reentrancy breakdowns')
    p.add_argument('--unlabeled', action='store_true',
                   help='ignore reentrancy types when matching')

    p = sub.add_parser('inspect', help='print the alignments of one sentence')
    _add_corpus_args(p)
    p.add_argument('--pred', required=True, help='alignment file (JSON)')
    p.add_argument('--id', help='sentence id (default: first sentence)')
    return ap


def _load_pairs(args):
    amrs = load_corpus(args.amr)
    sentences = load_annotations(args.anno)
    return pair_corpus(amrs, sentences), amrs, sentences


def cmd_train(args) -> int:
    pairs, _, _ = _load_pairs(args)
    config = TrainConfig(max_iterations=args.max_iter, phases=args.phases,
                         lambda_dup=args.lambda_dup,
                         lambda_backoff=args.lambda_backoff,
                         use_distance=not args.no_distance,
                         use_inductive_bias=not args.no_inductive_bias,
                         jobs=args.jobs)
    params, states = train(pairs, config)
    save_model(params, args.model)
    log.info('wrote model to %s', args.model)
    if args.out:
        write_alignments(states, args.out)
        log.info('wrote alignments to %s', args.out)
    return 0


def cmd_align(args) -> int:
    pairs, _, _ = _load_pairs(args)
    if args.rules_only:
        states = prealign_corpus(pairs)
        write_alignments(states, args.out, provenance=True)
    else:
        if not args.model:
            print('error: --model is required unless --rules-only is given',
                  file=sys.stderr)
            return 2
        params = load_model(args.model)
        states = align_corpus(pairs, params, phases=args.phases, jobs=args.jobs)
        write_alignments(states, args.out)
    log.info('wrote alignments to %s', args.out)
    return 0


def cmd_eval(args) -> int:
    amrs = load_corpus(args.amr)
    sentences = load_annotations(args.anno)
    sent_by_id = {s.id: s for s in sentences}
    amr_by_id = {a.id: a for a in amrs}
    gold = read_alignments(args.gold, sent_by_id, amr_by_id)
    pred = read_alignments(args.pred, sent_by_id, amr_by_id)
    gold_order = {st.sent.id: i for i, st in enumerate(gold)}
    pred.sort(key=lambda st: gold_order.get(st.sent.id, len(gold_order)))
    report = evaluate(gold, pred, labeled=not args.unlabeled)

    text = format_report(report)
    if args.layer:
        kept = []
        for line in text.splitlines():
            if line.strip().startswith(tuple(l for l in LAYERS if l != args.layer)):
                continue
            kept.append(line)
        text = '\n'.join(kept) + '\n'
    if not args.breakdown:
        text = '\n'.join(l for l in text.splitlines()
                         if not l.strip().startswith(('relation/', 'reentrancy/'))) + '\n'
    print(text, end='')

    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(report_tsv(report))
        base, _ = os.path.splitext(args.out)
        write_report_json(report, base + '.json')
        from .figures import render_figures
        out_dir = os.path.dirname(os.path.abspath(args.out))
        for p in render_figures(report, out_dir, pred):
            log.info('wrote figure %s', p)
        log.info('wrote report to %s', args.out)
    return 0


def _format_edges(edges):
    return ', '.join(f'{e.parent} {e.role} {e.child}' for e in edges)


def cmd_inspect(args) -> int:
    amrs = load_corpus(args.amr)
    sentences = load_annotations(args.anno)
    sent_by_id = {s.id: s for s in sentences}
    amr_by_id = {a.id: a for a in amrs}
    states = read_alignments(args.pred, sent_by_id, amr_by_id)
    if args.id:
        states = [st for st in states if st.sent.id == args.id]
        if not states:
            print(f'error: id {args.id!r} not found in {args.pred}', file=sys.stderr)
            return 1
    st = states[0]
    print(f'id: {st.sent.id}')
    print('sentence:', ' '.join(st.sent.tokens))
    print('subgraphs:')
    for i in range(len(st.spans)):
        subs = st.subgraphs[i]
        if subs:
            nodes = subs[0]
            parts = [f'{n} / {st.amr.nodes[n]}' for n in nodes]
            print(f'  {st.text(i)} -> ' + ', '.join(parts))
        else:
            print(f'  {st.text(i)} -> ∅')
    print('duplicates:')
    any_dup = False
    for i in range(len(st.spans)):
        for sub in st.subgraphs[i][1:]:
            any_dup = True
            parts = [f'{n} / {st.amr.nodes[n]}' for n in sub]
            print(f'  {st.text(i)} -> ' + ', '.join(parts))
    if not any_dup:
        print('  (none)')
    print('relations:')
    any_rel = False
    for i in range(len(st.spans)):
        if st.relations[i]:
            any_rel = True
            print(f'  {st.text(i)} -> {_format_edges(st.relations[i])}')
    if not any_rel:
        print('  (none)')
    print('reentrancies:')
    if st.reentrancies:
        for e, (i, rtype) in sorted(st.reentrancies.items(), key=lambda kv: kv[1][0]):
            print(f'  {st.text(i)} -> {e.parent} {e.role} {e.child} ({rtype})')
    else:
        print('  (none)')
    return 0


COMMANDS = {'train': cmd_train, 'align': cmd_align, 'eval': cmd_eval,
            'inspect': cmd_inspect}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format='%(message)s', stream=sys.stderr)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except (AMRError, AnnotationError, AlignmentError, ModelError, OSError,
            KeyError, ValueError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
