import { Example } from "../src/data.js";
import { Rng } from "../src/rng.js";
import { Vocabulary } from "../src/vocab.js";

/** Vocabulary with the pipeline's fixed layout for n variables. */
export function toyVocab(nvars: number): Vocabulary {
  const tokens = [
    "<s>", "</s>", "<pad>", "<sep>", ";", ",",
    ...Array.from({ length: nvars }, (_, i) => `x${i + 1}`),
    "+", "-", "*", "^",
    "=", ">", ">=", "<", "<=", "!=",
    ...Array.from({ length: 10 }, (_, d) => String(d)),
    ...Array.from({ length: 10 }, (_, d) => `c${d}`),
  ];
  return new Vocabulary(nvars, tokens);
}

/** Copy-style toy set: the output repeats the input's variable tokens.
 * Small enough to overfit in seconds, structured enough to need learning. */
export function copyExamples(
  vocab: Vocabulary,
  count: number,
  length: number,
  seed: number,
): Example[] {
  const rng = new Rng(seed);
  const variables = vocab.variableIds();
  const out: Example[] = [];
  for (let i = 0; i < count; i += 1) {
    const input: number[] = [];
    for (let j = 0; j < length; j += 1) {
      input.push(variables[rng.int(variables.length)]);
    }
    out.push({ id: i, input, output: input.slice() });
  }
  return out;
}

/** Ordering-style toy set: the target permutation is the variables sorted
 * by their first appearance in the input. */
export function orderingExamples(
  vocab: Vocabulary,
  count: number,
  seed: number,
): Example[] {
  const rng = new Rng(seed);
  const variables = vocab.variableIds();
  const out: Example[] = [];
  for (let i = 0; i < count; i += 1) {
    const perm = rng.shuffle(variables.slice());
    const input: number[] = [];
    for (const id of perm) {
      input.push(id);
      for (let k = rng.int(3); k > 0; k -= 1) {
        input.push(vocab.idOf("+"));
      }
    }
    out.push({ id: i, input, output: perm.slice() });
  }
  return out;
}
