import { existsSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { mergeConfig } from "../src/config.js";
import { loadCorpus, splitExamples, toExamples } from "../src/data.js";
import { decodeOrderings } from "../src/decode.js";
import {
  finetuneExamples,
  loadLabels,
  orderingAccuracy,
} from "../src/labels.js";
import { Transformer } from "../src/model.js";
import { finetune, defaultFrozenNames, pretrain } from "../src/train.js";
import { Vocabulary } from "../src/vocab.js";

/** End-to-end training gate. Heavy: run it explicitly with
 *   scripts/acceptance-data.sh data
 *   RUN_ACCEPTANCE=1 ACCEPTANCE_DATA=data npm run acceptance
 */
const enabled = !!process.env.RUN_ACCEPTANCE;
const dataDir = process.env.ACCEPTANCE_DATA ?? "acceptance-data";

const TIME_BUDGET_S = Number(process.env.ACCEPTANCE_BUDGET_S ?? 1800);

function report(ok: boolean, label: string): void {
  console.log(`${ok ? "[PASS]" : "[FAIL]"} ${label}`);
  expect(ok).toBe(true);
}

describe.skipIf(!enabled)("trainer acceptance", () => {
  const corpusPath = join(dataDir, "corpus.jsonl");
  const vocabPath = join(dataDir, "vocab.json");
  const tokensPath = join(dataDir, "tokens.jsonl");
  const labelsPath = join(dataDir, "labels.jsonl");
  for (const path of [corpusPath, vocabPath, tokensPath, labelsPath]) {
    if (!existsSync(path)) {
      throw new Error(`${path} missing; run scripts/acceptance-data.sh ${dataDir}`);
    }
  }

  const vocab = Vocabulary.fromFile(vocabPath);
  const cfg = mergeConfig({
    embeddingDim: 32,
    heads: 2,
    encoderLayers: 4,
    decoderLayers: 2,
    feedforwardDim: 128,
    dropout: 0,
    batchSize: 128,
    learningRate: 0.003,
    patience: 30,
    epochCap: 24,
    maxInputLength: 40,
    maxOutputLength: 72,
    seed: 0,
  });

  const started = Date.now();
  const elapsed = () => (Date.now() - started) / 1000;

  const loadTask = (task: string) =>
    toExamples(
      loadCorpus(corpusPath, task),
      vocab,
      cfg.maxInputLength,
      cfg.maxOutputLength,
    );

  let taskFModel: Transformer | null = null;

  it("pretrains task_e to sequence accuracy >= 0.99", () => {
    const result = pretrain(loadTask("e"), vocab, cfg, {
      targetAccuracy: 0.99,
    });
    report(
      result.validSequenceAccuracy >= 0.99 && elapsed() < TIME_BUDGET_S,
      `task_e sequence accuracy ${result.validSequenceAccuracy.toFixed(4)} >= 0.99 ` +
        `within budget (${elapsed().toFixed(0)}s)`,
    );
    result.model.dispose();
  });

  it("pretrains task_f to sequence accuracy >= 0.90", () => {
    const result = pretrain(loadTask("f"), vocab, cfg, {
      targetAccuracy: 0.9,
    });
    taskFModel = result.model;
    report(
      result.validSequenceAccuracy >= 0.9 && elapsed() < TIME_BUDGET_S,
      `task_f sequence accuracy ${result.validSequenceAccuracy.toFixed(4)} >= 0.90 ` +
        `within budget (${elapsed().toFixed(0)}s)`,
    );
  });

  it("keeps frozen tensors bit-identical and predicts valid permutations, " +
    "and pretraining beats from-scratch on relative accuracy", () => {
    expect(taskFModel).not.toBeNull();
    const labels = loadLabels(labelsPath);
    const examples = finetuneExamples(tokensPath, labels, vocab, cfg.maxInputLength);
    const { train: tuneSet, valid } = splitExamples(examples, 0.1, cfg.seed);
    const tuneCfg = { ...cfg, epochCap: 15, learningRate: 0.001 };

    const frozenNames = defaultFrozenNames(taskFModel!);
    const before = taskFModel!.weightDigest(frozenNames);
    const warm = finetune(taskFModel!, tuneSet, vocab, tuneCfg);
    report(
      warm.model.weightDigest(frozenNames) === before,
      "frozen embedding and lowest-3 encoder layers bit-identical through fine-tuning",
    );

    const scratch = new Transformer(tuneCfg, vocab.size, vocab.padId);
    const cold = finetune(scratch, tuneSet, vocab, tuneCfg);

    const score = (model: Transformer) => {
      const predictions: Array<{ id: string | number; ordering: number[] }> = [];
      let validPerms = 0;
      for (let i = 0; i < valid.length; i += 64) {
        const chunk = valid.slice(i, i + 64);
        const width = Math.max(...chunk.map((e) => e.input.length)) + 2;
        const rows = chunk.map((e) => {
          const row = [vocab.startId, ...e.input, vocab.endId];
          while (row.length < width) row.push(vocab.padId);
          return row;
        });
        const orderings = decodeOrderings(model, vocab, rows);
        chunk.forEach((e, j) => {
          const o = orderings[j];
          if (
            o.length === vocab.nvars &&
            new Set(o).size === vocab.nvars &&
            o.every((v) => v >= 1 && v <= vocab.nvars)
          ) {
            validPerms += 1;
          }
          predictions.push({ id: e.id, ordering: o });
        });
      }
      return { accuracy: orderingAccuracy(predictions, labels), validPerms };
    };

    const warmScore = score(warm.model);
    const coldScore = score(cold.model);

    report(
      warmScore.validPerms === valid.length && coldScore.validPerms === valid.length,
      `decoded predictions are valid permutations (${warmScore.validPerms}/${valid.length})`,
    );
    report(
      warmScore.accuracy.relAccuracy >= coldScore.accuracy.relAccuracy,
      `fine-tuned-from-task_f rel accuracy ${warmScore.accuracy.relAccuracy.toFixed(4)} ` +
        `>= from-scratch ${coldScore.accuracy.relAccuracy.toFixed(4)}`,
    );
    report(elapsed() < TIME_BUDGET_S, `total time ${elapsed().toFixed(0)}s < ${TIME_BUDGET_S}s`);
  });
});
