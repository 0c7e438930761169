import { Example, readJsonl } from "./data.js";
import { Vocabulary } from "./vocab.js";

/** Ordering labels as written by the pipeline's label command. */
export interface LabelRecord {
  id: string | number;
  absOptimal: number[][];
  relOptimal: number[][];
}

export function loadLabels(path: string): Map<string, LabelRecord> {
  const out = new Map<string, LabelRecord>();
  for (const row of readJsonl(path)) {
    if (!Array.isArray(row.abs_optimal)) continue;
    out.set(String(row.id), {
      id: row.id,
      absOptimal: row.abs_optimal,
      relOptimal: Array.isArray(row.rel_optimal) ? row.rel_optimal : row.abs_optimal,
    });
  }
  if (out.size === 0) throw new Error(`no label records in ${path}`);
  return out;
}

function body(tokens: string[]): string[] {
  let start = 0;
  let end = tokens.length;
  if (tokens[0] === "<s>") start = 1;
  const close = tokens.indexOf("</s>");
  if (close >= 0) end = close;
  return tokens.slice(start, end);
}

/** Join tokenized systems with their labels into fine-tuning examples:
 * the target is the first optimal ordering, spelled as variable tokens. */
export function finetuneExamples(
  tokensPath: string,
  labels: Map<string, LabelRecord>,
  vocab: Vocabulary,
  maxInputLength: number,
): Example[] {
  const variableIds = vocab.variableIds();
  const out: Example[] = [];
  for (const row of readJsonl(tokensPath)) {
    if (!Array.isArray(row.input_tokens)) continue;
    const label = labels.get(String(row.id));
    if (!label || label.absOptimal.length === 0) continue;
    const input = vocab.toIds(body(row.input_tokens));
    if (input.length > maxInputLength - 2) continue;
    const output = label.absOptimal[0].map((v) => variableIds[v - 1]);
    out.push({ id: row.id, input, output });
  }
  if (out.length === 0) {
    throw new Error("no tokenized systems matched the label file");
  }
  return out;
}

export interface OrderingScore {
  /** Fraction of predictions matching an absolutely optimal ordering. */
  absAccuracy: number;
  /** Fraction matching a relatively optimal ordering. */
  relAccuracy: number;
  scored: number;
}

export function orderingAccuracy(
  predictions: Array<{ id: string | number; ordering: number[] }>,
  labels: Map<string, LabelRecord>,
): OrderingScore {
  let absHits = 0;
  let relHits = 0;
  let scored = 0;
  const matches = (sets: number[][], ordering: number[]) =>
    sets.some(
      (s) => s.length === ordering.length && s.every((v, i) => v === ordering[i]),
    );
  for (const p of predictions) {
    const label = labels.get(String(p.id));
    if (!label) continue;
    scored += 1;
    if (matches(label.absOptimal, p.ordering)) absHits += 1;
    if (matches(label.relOptimal, p.ordering)) relHits += 1;
  }
  if (scored === 0) throw new Error("no predictions matched the label file");
  return { absAccuracy: absHits / scored, relAccuracy: relHits / scored, scored };
}
