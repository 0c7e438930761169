#!/usr/bin/env node
import { readFileSync, writeFileSync, renameSync } from "node:fs";
import { initBackend } from "./backend.js";
import { DEFAULT_CONFIG, ModelConfig, loadConfig, mergeConfig } from "./config.js";
import { loadCorpus, readJsonl, toExamples } from "./data.js";
import { decodeOrderings } from "./decode.js";
import { finetuneExamples, loadLabels } from "./labels.js";
import { Transformer } from "./model.js";
import { finetune, pretrain } from "./train.js";
import { Vocabulary } from "./vocab.js";

interface Args {
  command: string;
  options: Map<string, string>;
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0) throw new Error("usage: cadkit-trainer <command> [--flag value]");
  const [command, ...rest] = argv;
  const options = new Map<string, string>();
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    if (!flag.startsWith("--") || i + 1 >= rest.length) {
      throw new Error(`malformed flag: ${flag}`);
    }
    options.set(flag.slice(2), rest[i + 1]);
  }
  return { command, options };
}

function required(args: Args, flag: string): string {
  const value = args.options.get(flag);
  if (value === undefined) throw new Error(`missing required flag --${flag}`);
  return value;
}

function resolveConfig(args: Args): ModelConfig {
  const path = args.options.get("config");
  return path ? loadConfig(path) : mergeConfig({});
}

function writeCheckpoint(path: string, model: Transformer): void {
  const tmp = `${path}.tmp`;
  writeFileSync(tmp, model.serialize());
  renameSync(tmp, path);
}

function cmdPretrain(args: Args): void {
  const cfg = resolveConfig(args);
  const vocab = Vocabulary.fromFile(required(args, "vocab"));
  const records = loadCorpus(required(args, "corpus"), args.options.get("task"));
  const examples = toExamples(records, vocab, cfg.maxInputLength, cfg.maxOutputLength);
  const result = pretrain(examples, vocab, cfg);
  writeCheckpoint(required(args, "out"), result.model);
  console.log(
    JSON.stringify({
      valid_sequence_accuracy: result.validSequenceAccuracy,
      valid_token_accuracy: result.validTokenAccuracy,
      epochs: result.epochs,
    }),
  );
}

function cmdFinetune(args: Args): void {
  const cfg = resolveConfig(args);
  const vocab = Vocabulary.fromFile(required(args, "vocab"));
  const checkpoint = Transformer.deserialize(
    readFileSync(required(args, "model"), "utf8"),
  );
  const labels = loadLabels(required(args, "labels"));
  const examples = finetuneExamples(
    required(args, "tokens"),
    labels,
    vocab,
    cfg.maxInputLength,
  );
  const result = finetune(checkpoint, examples, vocab, cfg);
  writeCheckpoint(required(args, "out"), result.model);
  console.log(
    JSON.stringify({
      valid_sequence_accuracy: result.validSequenceAccuracy,
      epochs: result.epochs,
    }),
  );
}

function cmdPredict(args: Args): void {
  const vocab = Vocabulary.fromFile(required(args, "vocab"));
  const model = Transformer.deserialize(
    readFileSync(required(args, "model"), "utf8"),
  );
  const rows = readJsonl(required(args, "in")).filter((r) =>
    Array.isArray(r.input_tokens),
  );
  const lines: string[] = [];
  const batchSize = 64;
  for (let i = 0; i < rows.length; i += batchSize) {
    const chunk = rows.slice(i, i + batchSize);
    const width = Math.max(...chunk.map((r) => r.input_tokens.length));
    const encoder = chunk.map((r) => {
      const ids = vocab.toIds(r.input_tokens);
      while (ids.length < width) ids.push(vocab.padId);
      return ids;
    });
    const orderings = decodeOrderings(model, vocab, encoder);
    chunk.forEach((r, j) => {
      lines.push(JSON.stringify({ id: r.id, ordering: orderings[j] }));
    });
  }
  writeFileSync(required(args, "out"), lines.join("\n") + "\n");
}

function cmdDefaultConfig(): void {
  console.log(JSON.stringify(DEFAULT_CONFIG, null, 2));
}

export async function main(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv);
    if (args.command !== "default-config") await initBackend();
    switch (args.command) {
      case "pretrain":
        cmdPretrain(args);
        return 0;
      case "finetune":
        cmdFinetune(args);
        return 0;
      case "predict":
        cmdPredict(args);
        return 0;
      case "default-config":
        cmdDefaultConfig();
        return 0;
      default:
        throw new Error(`unknown command: ${args.command}`);
    }
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!)) {
  process.exit(await main(process.argv.slice(2)));
}
