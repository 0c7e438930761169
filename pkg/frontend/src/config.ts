import { readFileSync } from "node:fs";
import YAML from "yaml";

/** Model and training hyperparameters; defaults are the full-scale values,
 * every field is overridable for desk-scale runs. */
export interface ModelConfig {
  embeddingDim: number;
  heads: number;
  encoderLayers: number;
  decoderLayers: number;
  feedforwardDim: number;
  dropout: number;
  batchSize: number;
  learningRate: number;
  patience: number;
  epochCap: number;
  maxInputLength: number;
  maxOutputLength: number;
  seed: number;
}

export const DEFAULT_CONFIG: ModelConfig = {
  embeddingDim: 256,
  heads: 8,
  encoderLayers: 7,
  decoderLayers: 6,
  feedforwardDim: 1024,
  dropout: 0.1,
  batchSize: 128,
  learningRate: 0.0001,
  patience: 30,
  epochCap: 100,
  maxInputLength: 128,
  maxOutputLength: 96,
  seed: 0,
};

const NUMERIC_MINIMUMS: Array<[keyof ModelConfig, number]> = [
  ["embeddingDim", 1],
  ["heads", 1],
  ["encoderLayers", 1],
  ["decoderLayers", 1],
  ["feedforwardDim", 1],
  ["batchSize", 1],
  ["patience", 1],
  ["epochCap", 1],
  ["maxInputLength", 2],
  ["maxOutputLength", 2],
];

export function validateConfig(cfg: ModelConfig): ModelConfig {
  for (const [key, min] of NUMERIC_MINIMUMS) {
    const value = cfg[key] as number;
    if (!Number.isInteger(value) || value < min) {
      throw new Error(`config field ${key} must be an integer >= ${min}`);
    }
  }
  if (cfg.embeddingDim % cfg.heads !== 0) {
    throw new Error("embeddingDim must be divisible by heads");
  }
  if (cfg.dropout < 0 || cfg.dropout >= 1) {
    throw new Error("dropout must be in [0, 1)");
  }
  if (!(cfg.learningRate > 0)) {
    throw new Error("learningRate must be positive");
  }
  return cfg;
}

export function mergeConfig(overrides: Partial<ModelConfig>): ModelConfig {
  const unknown = Object.keys(overrides).filter(
    (k) => !(k in DEFAULT_CONFIG),
  );
  if (unknown.length) {
    throw new Error(`unknown config fields: ${unknown.join(", ")}`);
  }
  return validateConfig({ ...DEFAULT_CONFIG, ...overrides });
}

/** One YAML or JSON file mirroring ModelConfig; missing fields default. */
export function loadConfig(path: string): ModelConfig {
  const text = readFileSync(path, "utf8");
  const parsed = path.endsWith(".json")
    ? JSON.parse(text)
    : YAML.parse(text);
  if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
    throw new Error(`config file ${path} is not a mapping`);
  }
  return mergeConfig(parsed as Partial<ModelConfig>);
}
