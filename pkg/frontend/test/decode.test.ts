import { describe, expect, it } from "vitest";
import { mergeConfig } from "../src/config.js";
import { decodeOrderings, decodeSequences } from "../src/decode.js";
import { Transformer } from "../src/model.js";
import { Rng } from "../src/rng.js";
import { toyVocab } from "./util.js";

function smallConfig(seed: number, nvars: number) {
  return mergeConfig({
    embeddingDim: 16,
    heads: 2,
    encoderLayers: 1,
    decoderLayers: 1,
    feedforwardDim: 32,
    dropout: 0,
    maxInputLength: 32,
    maxOutputLength: nvars + 2,
    seed,
  });
}

function isPermutation(ordering: number[], nvars: number): boolean {
  return (
    ordering.length === nvars &&
    new Set(ordering).size === nvars &&
    ordering.every((v) => v >= 1 && v <= nvars)
  );
}

describe("decodeOrderings", () => {
  it("emits a valid permutation for every row of untrained models", () => {
    for (const nvars of [2, 3, 4]) {
      const vocab = toyVocab(nvars);
      for (const seed of [0, 1, 2]) {
        const model = new Transformer(smallConfig(seed, nvars), vocab.size, vocab.padId);
        const rng = new Rng(seed + 100);
        const rows = Array.from({ length: 8 }, () => {
          const len = 3 + rng.int(10);
          const row = Array.from({ length: len }, () =>
            rng.int(vocab.size - 3) + 3,
          );
          return [vocab.startId, ...row, vocab.endId];
        });
        const width = Math.max(...rows.map((r) => r.length));
        const padded = rows.map((r) => [
          ...r,
          ...Array(width - r.length).fill(vocab.padId),
        ]);
        const orderings = decodeOrderings(model, vocab, padded);
        expect(orderings.length).toBe(rows.length);
        for (const ordering of orderings) {
          expect(isPermutation(ordering, nvars)).toBe(true);
        }
        model.dispose();
      }
    }
  });
});

describe("decodeSequences", () => {
  it("never exceeds maxLen and never emits framing tokens", () => {
    const vocab = toyVocab(3);
    const model = new Transformer(smallConfig(5, 3), vocab.size, vocab.padId);
    const rows = [
      [vocab.startId, vocab.idOf("x1"), vocab.idOf("x2"), vocab.endId],
      [vocab.startId, vocab.idOf("x3"), vocab.endId, vocab.padId],
    ];
    const decoded = decodeSequences(model, vocab, rows, 6);
    for (const seq of decoded) {
      expect(seq.length).toBeLessThanOrEqual(6);
      for (const id of seq) {
        expect([vocab.startId, vocab.endId, vocab.padId]).not.toContain(id);
      }
    }
    model.dispose();
  });
});
