import { readFileSync } from "node:fs";
import { Rng } from "./rng.js";
import { Vocabulary } from "./vocab.js";

/** One corpus record as written by the pipeline CLI. */
export interface CorpusRecord {
  id: string | number;
  task: string;
  inputTokens: string[];
  outputTokens: string[];
}

export interface Example {
  id: string | number;
  input: number[];
  output: number[];
}

export interface Batch {
  /** [batch, inLen] input ids, padded. */
  encoder: number[][];
  /** [batch, outLen] decoder input ids (starts with <s>). */
  decoderIn: number[][];
  /** [batch, outLen] target ids (ends with </s>, then pads). */
  target: number[][];
  ids: Array<string | number>;
}

export function readJsonl(path: string): any[] {
  const out: any[] = [];
  for (const line of readFileSync(path, "utf8").split("\n")) {
    const trimmed = line.trim();
    if (trimmed) out.push(JSON.parse(trimmed));
  }
  return out;
}

export function loadCorpus(path: string, task?: string): CorpusRecord[] {
  const records: CorpusRecord[] = [];
  for (const row of readJsonl(path)) {
    if (!Array.isArray(row.input_tokens)) continue;
    if (task !== undefined && row.task !== task) continue;
    if (!Array.isArray(row.output_tokens)) continue;
    records.push({
      id: row.id,
      task: row.task,
      inputTokens: row.input_tokens,
      outputTokens: row.output_tokens,
    });
  }
  if (records.length === 0) {
    throw new Error(`no usable records in ${path}` + (task ? ` for task ${task}` : ""));
  }
  return records;
}

/** Strip framing tokens; sequences from the pipeline carry <s>...</s>. */
function body(tokens: string[]): string[] {
  let start = 0;
  let end = tokens.length;
  if (tokens[0] === "<s>") start = 1;
  const close = tokens.indexOf("</s>");
  if (close >= 0) end = close;
  return tokens.slice(start, end);
}

export function toExamples(
  records: CorpusRecord[],
  vocab: Vocabulary,
  maxInputLength: number,
  maxOutputLength: number,
): Example[] {
  const out: Example[] = [];
  for (const record of records) {
    const input = vocab.toIds(body(record.inputTokens));
    const output = vocab.toIds(body(record.outputTokens));
    if (input.length > maxInputLength - 2 || output.length > maxOutputLength - 2) {
      continue;
    }
    out.push({ id: record.id, input, output });
  }
  if (out.length === 0) {
    throw new Error("every record exceeds the configured sequence lengths");
  }
  return out;
}

export function splitExamples(
  examples: Example[],
  validFraction: number,
  seed: number,
): { train: Example[]; valid: Example[] } {
  const shuffled = new Rng(seed).shuffle(examples);
  const nValid = Math.max(1, Math.floor(validFraction * shuffled.length));
  return {
    valid: shuffled.slice(0, nValid),
    train: shuffled.slice(nValid),
  };
}

function pad(ids: number[], width: number, padId: number): number[] {
  const out = ids.slice();
  while (out.length < width) out.push(padId);
  return out;
}

export function makeBatch(examples: Example[], vocab: Vocabulary): Batch {
  const inWidth = Math.max(...examples.map((e) => e.input.length)) + 2;
  const outWidth = Math.max(...examples.map((e) => e.output.length)) + 1;
  const encoder: number[][] = [];
  const decoderIn: number[][] = [];
  const target: number[][] = [];
  for (const e of examples) {
    encoder.push(
      pad([vocab.startId, ...e.input, vocab.endId], inWidth, vocab.padId),
    );
    decoderIn.push(pad([vocab.startId, ...e.output], outWidth, vocab.padId));
    target.push(pad([...e.output, vocab.endId], outWidth, vocab.padId));
  }
  return { encoder, decoderIn, target, ids: examples.map((e) => e.id) };
}

export function* batches(
  examples: Example[],
  batchSize: number,
  vocab: Vocabulary,
  rng?: Rng,
): Generator<Batch> {
  const order = rng ? rng.shuffle(examples) : examples;
  for (let i = 0; i < order.length; i += batchSize) {
    yield makeBatch(order.slice(i, i + batchSize), vocab);
  }
}
