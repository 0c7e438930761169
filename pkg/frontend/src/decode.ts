import * as tf from "@tensorflow/tfjs";
import { Transformer } from "./model.js";
import { Vocabulary } from "./vocab.js";

/** Greedy autoregressive decoding. For orderings, a permutation mask keeps
 * only unused variable tokens until every variable has been emitted, then
 * forces the end marker, so the output is always a valid permutation. */

function argmaxAllowed(logits: Float32Array, allowed: Set<number>): number {
  let best = -1;
  let bestScore = -Infinity;
  for (const id of allowed) {
    const score = logits[id];
    if (score > bestScore) {
      bestScore = score;
      best = id;
    }
  }
  if (best < 0) throw new Error("no allowed token to decode");
  return best;
}

function stepLogits(
  model: Transformer,
  encIds: tf.Tensor2D,
  memory: tf.Tensor,
  prefix: number[][],
): Float32Array[] {
  return tf.tidy(() => {
    const decIds = tf.tensor2d(prefix, undefined, "int32");
    const logits = model.decode(decIds, encIds, memory, false);
    const lastStep = tf.squeeze(
      tf.slice(
        logits,
        [0, prefix[0].length - 1, 0],
        [prefix.length, 1, model.vocabSize],
      ),
      [1],
    );
    const flat = lastStep.dataSync() as Float32Array;
    const out: Float32Array[] = [];
    for (let b = 0; b < prefix.length; b += 1) {
      out.push(flat.slice(b * model.vocabSize, (b + 1) * model.vocabSize));
    }
    return out;
  });
}

/** Decode variable orderings for a batch of encoder inputs.
 * Returns one permutation of 1..nvars per row. */
export function decodeOrderings(
  model: Transformer,
  vocab: Vocabulary,
  encoderRows: number[][],
): number[][] {
  const variableIds = vocab.variableIds();
  const idToVariable = new Map(variableIds.map((id, i) => [id, i + 1]));
  return tf.tidy(() => {
    const encIds = tf.tensor2d(encoderRows, undefined, "int32");
    const memory = model.encode(encIds, false);
    const prefix: number[][] = encoderRows.map(() => [vocab.startId]);
    const used: Array<Set<number>> = encoderRows.map(() => new Set());
    for (let step = 0; step < vocab.nvars; step += 1) {
      const logits = stepLogits(model, encIds, memory, prefix);
      for (let b = 0; b < encoderRows.length; b += 1) {
        const allowed = new Set(
          variableIds.filter((id) => !used[b].has(id)),
        );
        const chosen = argmaxAllowed(logits[b], allowed);
        used[b].add(chosen);
        prefix[b].push(chosen);
      }
    }
    return prefix.map((row) =>
      row.slice(1).map((id) => {
        const v = idToVariable.get(id);
        if (v === undefined) throw new Error("non-variable token decoded");
        return v;
      }),
    );
  });
}

/** Unconstrained greedy decode (feature tasks); stops at </s> or maxLen. */
export function decodeSequences(
  model: Transformer,
  vocab: Vocabulary,
  encoderRows: number[][],
  maxLen: number,
): number[][] {
  return tf.tidy(() => {
    const encIds = tf.tensor2d(encoderRows, undefined, "int32");
    const memory = model.encode(encIds, false);
    const prefix: number[][] = encoderRows.map(() => [vocab.startId]);
    const done: boolean[] = encoderRows.map(() => false);
    const banned = new Set([vocab.startId, vocab.padId]);
    for (let step = 0; step < maxLen && !done.every(Boolean); step += 1) {
      const logits = stepLogits(model, encIds, memory, prefix);
      for (let b = 0; b < encoderRows.length; b += 1) {
        if (done[b]) {
          prefix[b].push(vocab.padId);
          continue;
        }
        const allowed = new Set<number>();
        for (let id = 0; id < vocab.size; id += 1) {
          if (!banned.has(id)) allowed.add(id);
        }
        const chosen = argmaxAllowed(logits[b], allowed);
        if (chosen === vocab.endId) done[b] = true;
        prefix[b].push(chosen);
      }
    }
    return prefix.map((row) => {
      const out: number[] = [];
      for (const id of row.slice(1)) {
        if (id === vocab.endId || id === vocab.padId) break;
        out.push(id);
      }
      return out;
    });
  });
}
