import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import {
  loadCorpus,
  makeBatch,
  readJsonl,
  splitExamples,
  toExamples,
} from "../src/data.js";
import { Vocabulary } from "../src/vocab.js";
import { copyExamples, toyVocab } from "./util.js";

const dir = mkdtempSync(join(tmpdir(), "trainer-data-"));
const vocab = toyVocab(3);

function writeJsonl(name: string, rows: unknown[]): string {
  const path = join(dir, name);
  writeFileSync(path, rows.map((r) => JSON.stringify(r)).join("\n") + "\n");
  return path;
}

describe("vocabulary", () => {
  it("round-trips tokens through ids", () => {
    const tokens = ["x1", "+", "x2", "^", "2"];
    expect(vocab.fromIds(vocab.toIds(tokens))).toEqual(tokens);
  });

  it("exposes framing token ids", () => {
    expect(vocab.tokens[vocab.startId]).toBe("<s>");
    expect(vocab.tokens[vocab.endId]).toBe("</s>");
    expect(vocab.tokens[vocab.padId]).toBe("<pad>");
  });

  it("lists variable ids in variable order", () => {
    expect(vocab.fromIds(vocab.variableIds())).toEqual(["x1", "x2", "x3"]);
  });

  it("rejects unknown tokens and out-of-range ids", () => {
    expect(() => vocab.idOf("y9")).toThrow(/not in vocabulary/);
    expect(() => vocab.fromIds([vocab.size])).toThrow(/out of range/);
  });

  it("loads the sidecar format", () => {
    const path = join(dir, "vocab.json");
    writeFileSync(path, JSON.stringify({ nvars: 3, tokens: vocab.tokens }));
    const loaded = Vocabulary.fromFile(path);
    expect(loaded.size).toBe(vocab.size);
    expect(loaded.variableIds()).toEqual(vocab.variableIds());
  });
});

describe("corpus loading", () => {
  const rows = [
    { id: 1, task: "e", input_tokens: ["<s>", "x1", "</s>"], output_tokens: ["<s>", "x1", "</s>"] },
    { id: 2, task: "f", input_tokens: ["<s>", "x2", "</s>"], output_tokens: ["<s>", "x2", "</s>"] },
    { id: 3, task: "e", dropped: "no tokens" },
  ];

  it("reads JSONL and skips blank lines", () => {
    const path = join(dir, "mixed.jsonl");
    writeFileSync(path, '{"a":1}\n\n{"a":2}\n');
    expect(readJsonl(path)).toEqual([{ a: 1 }, { a: 2 }]);
  });

  it("filters by task and drops token-less rows", () => {
    const path = writeJsonl("corpus.jsonl", rows);
    expect(loadCorpus(path).map((r) => r.id)).toEqual([1, 2]);
    expect(loadCorpus(path, "e").map((r) => r.id)).toEqual([1]);
  });

  it("errors when nothing matches", () => {
    const path = writeJsonl("corpus2.jsonl", rows);
    expect(() => loadCorpus(path, "zzz")).toThrow(/no usable records/);
  });

  it("strips framing tokens and enforces length limits", () => {
    const path = writeJsonl("corpus3.jsonl", rows);
    const examples = toExamples(loadCorpus(path), vocab, 16, 16);
    expect(examples[0].input).toEqual([vocab.idOf("x1")]);
    expect(() => toExamples(loadCorpus(path), vocab, 2, 2)).toThrow(/exceeds/);
  });
});

describe("batching", () => {
  it("pads to the widest row and frames sequences", () => {
    const examples = [
      { id: "a", input: vocab.toIds(["x1", "x2"]), output: vocab.toIds(["x2"]) },
      { id: "b", input: vocab.toIds(["x3"]), output: vocab.toIds(["x1", "x3"]) },
    ];
    const batch = makeBatch(examples, vocab);
    expect(batch.encoder[0]).toEqual([
      vocab.startId, vocab.idOf("x1"), vocab.idOf("x2"), vocab.endId,
    ]);
    expect(batch.encoder[1]).toEqual([
      vocab.startId, vocab.idOf("x3"), vocab.endId, vocab.padId,
    ]);
    expect(batch.decoderIn[0]).toEqual([
      vocab.startId, vocab.idOf("x2"), vocab.padId,
    ]);
    expect(batch.target[0]).toEqual([
      vocab.idOf("x2"), vocab.endId, vocab.padId,
    ]);
    expect(batch.target[1]).toEqual([
      vocab.idOf("x1"), vocab.idOf("x3"), vocab.endId,
    ]);
    expect(batch.ids).toEqual(["a", "b"]);
  });
});

describe("splitExamples", () => {
  const examples = copyExamples(vocab, 40, 5, 7);

  it("is deterministic for a fixed seed and partitions the set", () => {
    const first = splitExamples(examples, 0.25, 3);
    const second = splitExamples(examples, 0.25, 3);
    expect(first.valid.map((e) => e.id)).toEqual(second.valid.map((e) => e.id));
    expect(first.valid.length).toBe(10);
    const ids = [...first.train, ...first.valid].map((e) => e.id).sort((a, b) => +a - +b);
    expect(ids).toEqual(examples.map((e) => e.id));
  });

  it("keeps at least one validation example", () => {
    const { valid } = splitExamples(examples.slice(0, 3), 0.01, 0);
    expect(valid.length).toBe(1);
  });
});
