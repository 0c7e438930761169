import * as tf from "@tensorflow/tfjs";
import { ModelConfig } from "./config.js";
import { Batch, Example, batches, makeBatch, splitExamples } from "./data.js";
import { Transformer } from "./model.js";
import { Rng } from "./rng.js";
import { Vocabulary } from "./vocab.js";

export interface TrainResult {
  model: Transformer;
  /** Best validation sequence-exact accuracy. */
  validSequenceAccuracy: number;
  validTokenAccuracy: number;
  epochs: number;
  history: Array<{ epoch: number; loss: number; validSeqAcc: number }>;
}

export interface FineTuneSpec {
  /** Weight names kept bit-identical; the default freezes the input
   * embedding plus the lowest three encoder layers. */
  frozenNames?: string[];
}

export function defaultFrozenNames(model: Transformer): string[] {
  const names = model.embeddingNames();
  const layers = Math.min(3, model.cfg.encoderLayers);
  for (let i = 0; i < layers; i += 1) {
    names.push(...model.encoderLayerNames(i));
  }
  return names;
}

function maskedLoss(
  model: Transformer,
  batch: Batch,
  padId: number,
): tf.Scalar {
  const encIds = tf.tensor2d(batch.encoder, undefined, "int32");
  const decIds = tf.tensor2d(batch.decoderIn, undefined, "int32");
  const targets = tf.tensor2d(batch.target, undefined, "int32");
  const logits = model.forward(encIds, decIds, true);
  const mask = tf.cast(tf.notEqual(targets, padId), "float32");
  const oneHot = tf.oneHot(targets, model.vocabSize);
  const perToken = tf.losses.softmaxCrossEntropy(
    oneHot,
    logits,
    undefined,
    undefined,
    tf.Reduction.NONE,
  );
  return tf.div(
    tf.sum(tf.mul(perToken, mask)),
    tf.add(tf.sum(mask), 1e-9),
  ) as tf.Scalar;
}

interface Optimizers {
  encoder: tf.Optimizer;
  decoder: tf.Optimizer;
  encoderVars: tf.Variable[];
  decoderVars: tf.Variable[];
}

function buildOptimizers(
  model: Transformer,
  cfg: ModelConfig,
  frozen: Set<string>,
): Optimizers {
  const encoderVars = model
    .encoderNames()
    .filter((n) => !frozen.has(n))
    .map((n) => model.w(n));
  const decoderVars = model
    .decoderNames()
    .filter((n) => !frozen.has(n))
    .map((n) => model.w(n));
  return {
    encoder: tf.train.adam(cfg.learningRate),
    decoder: tf.train.adam(cfg.learningRate),
    encoderVars,
    decoderVars,
  };
}

function trainStep(
  model: Transformer,
  batch: Batch,
  opt: Optimizers,
  padId: number,
): number {
  const trainable = [...opt.encoderVars, ...opt.decoderVars];
  const encoderSet = new Set(opt.encoderVars);
  let lossValue = 0;
  tf.tidy(() => {
    const { value, grads } = tf.variableGrads(
      () => maskedLoss(model, batch, padId),
      trainable,
    );
    lossValue = value.dataSync()[0];
    const encGrads: tf.NamedTensorMap = {};
    const decGrads: tf.NamedTensorMap = {};
    for (const variable of trainable) {
      const grad = grads[variable.name];
      if (!grad) continue;
      if (encoderSet.has(variable)) encGrads[variable.name] = grad;
      else decGrads[variable.name] = grad;
    }
    if (Object.keys(encGrads).length) opt.encoder.applyGradients(encGrads);
    if (Object.keys(decGrads).length) opt.decoder.applyGradients(decGrads);
  });
  return lossValue;
}

export interface Accuracy {
  sequenceExact: number;
  tokenExact: number;
}

/** Teacher-forcing accuracy over a set of examples. */
export function teacherForcingAccuracy(
  model: Transformer,
  examples: Example[],
  vocab: Vocabulary,
  batchSize: number,
): Accuracy {
  let seqHits = 0;
  let tokenHits = 0;
  let tokenTotal = 0;
  for (const batch of batches(examples, batchSize, vocab)) {
    tf.tidy(() => {
      const encIds = tf.tensor2d(batch.encoder, undefined, "int32");
      const decIds = tf.tensor2d(batch.decoderIn, undefined, "int32");
      const logits = model.forward(encIds, decIds, false);
      const predicted = tf.argMax(logits, -1).arraySync() as number[][];
      for (let b = 0; b < batch.target.length; b += 1) {
        let allMatch = true;
        for (let j = 0; j < batch.target[b].length; j += 1) {
          const target = batch.target[b][j];
          if (target === vocab.padId) continue;
          tokenTotal += 1;
          if (predicted[b][j] === target) tokenHits += 1;
          else allMatch = false;
        }
        if (allMatch) seqHits += 1;
      }
    });
  }
  return {
    sequenceExact: seqHits / examples.length,
    tokenExact: tokenTotal ? tokenHits / tokenTotal : 0,
  };
}

export interface TrainOptions {
  /** Stop as soon as validation sequence accuracy reaches this value. */
  targetAccuracy?: number;
  quiet?: boolean;
  frozen?: Set<string>;
}

export function train(
  model: Transformer,
  examples: Example[],
  vocab: Vocabulary,
  cfg: ModelConfig,
  options: TrainOptions = {},
): TrainResult {
  if (examples.length < 2) throw new Error("corpus too small to train on");
  const { train: trainSet, valid } = splitExamples(examples, 0.1, cfg.seed);
  const frozen = options.frozen ?? new Set<string>();
  const opt = buildOptimizers(model, cfg, frozen);
  const rng = new Rng(cfg.seed + 17);
  const history: TrainResult["history"] = [];
  let bestAcc = -1;
  let bestTokenAcc = 0;
  let bestWeights: string | null = null;
  let sinceBest = 0;
  let epoch = 0;
  for (; epoch < cfg.epochCap; epoch += 1) {
    // cosine decay to 10% of the base rate over the epoch cap; the flat
    // base rate oscillates near convergence on the larger corpora
    const decay = 0.1 + 0.45 * (1 + Math.cos((Math.PI * epoch) / cfg.epochCap));
    (opt.encoder as unknown as { learningRate: number }).learningRate =
      cfg.learningRate * decay;
    (opt.decoder as unknown as { learningRate: number }).learningRate =
      cfg.learningRate * decay;
    let lossSum = 0;
    let steps = 0;
    for (const batch of batches(trainSet, cfg.batchSize, vocab, rng)) {
      lossSum += trainStep(model, batch, opt, vocab.padId);
      steps += 1;
    }
    const acc = teacherForcingAccuracy(model, valid, vocab, cfg.batchSize);
    history.push({
      epoch,
      loss: lossSum / Math.max(steps, 1),
      validSeqAcc: acc.sequenceExact,
    });
    if (!options.quiet) {
      console.error(
        `epoch ${epoch}: loss ${(lossSum / Math.max(steps, 1)).toFixed(4)} ` +
          `valid seq-acc ${acc.sequenceExact.toFixed(4)}`,
      );
    }
    if (acc.sequenceExact > bestAcc) {
      bestAcc = acc.sequenceExact;
      bestTokenAcc = acc.tokenExact;
      bestWeights = model.serialize();
      sinceBest = 0;
    } else {
      sinceBest += 1;
    }
    if (options.targetAccuracy !== undefined && bestAcc >= options.targetAccuracy) {
      epoch += 1;
      break;
    }
    if (sinceBest >= cfg.patience) {
      epoch += 1;
      break;
    }
  }
  if (bestWeights !== null) {
    const best = Transformer.deserialize(bestWeights);
    model.loadFrom(best);
    best.dispose();
  }
  return {
    model,
    validSequenceAccuracy: bestAcc,
    validTokenAccuracy: bestTokenAcc,
    epochs: epoch,
    history,
  };
}

export function pretrain(
  examples: Example[],
  vocab: Vocabulary,
  cfg: ModelConfig,
  options: TrainOptions = {},
): TrainResult {
  const model = new Transformer(cfg, vocab.size, vocab.padId);
  return train(model, examples, vocab, cfg, options);
}

/** Fine-tune from a checkpointed model with the default frozen groups.
 * Throws if any frozen tensor changes. */
export function finetune(
  checkpoint: Transformer,
  examples: Example[],
  vocab: Vocabulary,
  cfg: ModelConfig,
  spec: FineTuneSpec = {},
  options: TrainOptions = {},
): TrainResult {
  const model = new Transformer(cfg, vocab.size, vocab.padId);
  model.loadFrom(checkpoint);
  const frozenNames = spec.frozenNames ?? defaultFrozenNames(model);
  const before = model.weightDigest(frozenNames);
  const result = train(model, examples, vocab, cfg, {
    ...options,
    frozen: new Set(frozenNames),
  });
  const after = model.weightDigest(frozenNames);
  if (before !== after) {
    throw new Error("freezing contract violated: frozen tensors changed");
  }
  return result;
}

export { makeBatch };
