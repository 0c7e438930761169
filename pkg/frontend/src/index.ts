export { DEFAULT_CONFIG, loadConfig, mergeConfig } from "./config.js";
export type { ModelConfig } from "./config.js";
export { Vocabulary } from "./vocab.js";
export {
  loadCorpus,
  readJsonl,
  toExamples,
  splitExamples,
  makeBatch,
  batches,
} from "./data.js";
export type { Batch, CorpusRecord, Example } from "./data.js";
export { Transformer } from "./model.js";
export { decodeOrderings, decodeSequences } from "./decode.js";
export {
  defaultFrozenNames,
  finetune,
  pretrain,
  teacherForcingAccuracy,
  train,
} from "./train.js";
export type { FineTuneSpec, TrainOptions, TrainResult } from "./train.js";
export { finetuneExamples, loadLabels, orderingAccuracy } from "./labels.js";
export type { LabelRecord, OrderingScore } from "./labels.js";
export { initBackend } from "./backend.js";
export { Rng } from "./rng.js";
export { main } from "./cli.js";
