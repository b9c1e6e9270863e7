/** Reader for the metadata lines of an AMR corpus file.
 *
 * Sentences live in `# ::snt` comments and, when present, `# ::tok` holds
 * the authoritative tokenization. Graph bodies are ignored here; this
 * package only produces the annotation sidecar.
 */

export interface CorpusSentence {
  id: string;
  snt: string;
  /** Tokens from `# ::tok`, or null when the corpus has no tok lines. */
  tok: string[] | null;
}

export function parseCorpus(text: string): CorpusSentence[] {
  const sentences: CorpusSentence[] = [];
  const blocks = text.split(/\n\s*\n/);
  let anon = 0;
  for (const block of blocks) {
    if (!block.trim()) continue;
    let id: string | null = null;
    let snt: string | null = null;
    let tok: string[] | null = null;
    let hasGraph = false;
    for (const line of block.split('\n')) {
      const meta = line.match(/^#\s*::(\w+)\s*(.*)$/);
      if (meta) {
        const [, key, value] = meta;
        if (key === 'id') id = value.trim();
        else if (key === 'snt') snt = value.trim();
        else if (key === 'tok') tok = value.trim().split(/\s+/);
      } else if (line.trim() && !line.startsWith('#')) {
        hasGraph = true;
      }
    }
    if (!hasGraph) continue;
    if (id === null) id = `sent_${anon++}`;
    if (snt === null && tok === null) {
      throw new Error(`block for ${id} has neither ::snt nor ::tok`);
    }
    sentences.push({ id, snt: snt ?? (tok as string[]).join(' '), tok });
  }
  const seen = new Set<string>();
  for (const s of sentences) {
    if (seen.has(s.id)) throw new Error(`duplicate sentence id ${s.id}`);
    seen.add(s.id);
  }
  return sentences;
}
