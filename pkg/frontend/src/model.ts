import * as tf from "@tensorflow/tfjs";
import { createHash, randomUUID } from "node:crypto";
import { ModelConfig } from "./config.js";
import { Rng } from "./rng.js";

/** Encoder-decoder Transformer over the pipeline vocabulary, built from
 * explicit variables so parameter groups (embedding, per-encoder-layer,
 * decoder) can be frozen and checkpointed exactly. */

/** Glorot-normal std; a fixed small std starves tiny models because the
 * positional encoding then dwarfs the token embedding. */
function initStd(shape: number[]): number {
  const fanIn = shape.length > 1 ? shape[0] : shape[0];
  const fanOut = shape.length > 1 ? shape[shape.length - 1] : shape[0];
  return Math.sqrt(2 / (fanIn + fanOut));
}

// tf.Variable names must be globally unique in the tf engine; logical weight
// names repeat across model instances (and module reloads can share one
// engine), so each instance gets a random prefix. Checkpoints use the
// logical names only.

function seededTensor(rng: Rng, shape: number[], std: number): tf.Tensor {
  const size = shape.reduce((a, b) => a * b, 1);
  const data = new Float32Array(size);
  for (let i = 0; i < size; i += 1) data[i] = rng.normal() * std;
  return tf.tensor(data, shape);
}

function positionalEncoding(length: number, dim: number): tf.Tensor2D {
  const data = new Float32Array(length * dim);
  for (let pos = 0; pos < length; pos += 1) {
    for (let i = 0; i < dim; i += 1) {
      const angle = pos / Math.pow(10000, (2 * Math.floor(i / 2)) / dim);
      data[pos * dim + i] = i % 2 === 0 ? Math.sin(angle) : Math.cos(angle);
    }
  }
  return tf.tensor2d(data, [length, dim]);
}

export interface AttentionSpec {
  prefix: string;
}

/** [batch, len, dIn] x [dIn, dOut]; tfjs cannot differentiate the broadcast
 * 3D x 2D matMul, so flatten to 2D around the product. */
function dense3d(x: tf.Tensor, w: tf.Tensor): tf.Tensor {
  const [batch, len, dIn] = x.shape as number[];
  const dOut = w.shape[1] as number;
  const flat = tf.matMul(tf.reshape(x, [batch * len, dIn]), w);
  return tf.reshape(flat, [batch, len, dOut]);
}

export class Transformer {
  readonly cfg: ModelConfig;
  readonly vocabSize: number;
  readonly padId: number;
  readonly weights = new Map<string, tf.Variable>();
  private readonly instanceId: string;
  private dropoutCounter = 0;

  constructor(cfg: ModelConfig, vocabSize: number, padId: number) {
    this.instanceId = randomUUID();
    this.cfg = cfg;
    this.vocabSize = vocabSize;
    this.padId = padId;
    const rng = new Rng(cfg.seed + 0x5eed);
    const d = cfg.embeddingDim;
    const f = cfg.feedforwardDim;
    this.add(rng, "embedding", [vocabSize, d]);
    this.add(rng, "outProj", [d, vocabSize]);
    this.addZeros("outBias", [vocabSize]);
    for (let i = 0; i < cfg.encoderLayers; i += 1) {
      this.addAttention(rng, `enc${i}.self`, d);
      this.addLayerNorm(`enc${i}.ln1`, d);
      this.addFfn(rng, `enc${i}`, d, f);
      this.addLayerNorm(`enc${i}.ln2`, d);
    }
    for (let i = 0; i < cfg.decoderLayers; i += 1) {
      this.addAttention(rng, `dec${i}.self`, d);
      this.addLayerNorm(`dec${i}.ln1`, d);
      this.addAttention(rng, `dec${i}.cross`, d);
      this.addLayerNorm(`dec${i}.ln2`, d);
      this.addFfn(rng, `dec${i}`, d, f);
      this.addLayerNorm(`dec${i}.ln3`, d);
    }
  }

  private register(name: string, value: tf.Tensor): void {
    this.weights.set(
      name,
      tf.variable(value, true, `m${this.instanceId}/${name}`),
    );
  }

  private add(rng: Rng, name: string, shape: number[]): void {
    this.register(name, seededTensor(rng, shape, initStd(shape)));
  }

  private addZeros(name: string, shape: number[]): void {
    this.register(name, tf.zeros(shape));
  }

  private addOnes(name: string, shape: number[]): void {
    this.register(name, tf.ones(shape));
  }

  private addAttention(rng: Rng, prefix: string, d: number): void {
    for (const part of ["wq", "wk", "wv", "wo"]) {
      this.add(rng, `${prefix}.${part}`, [d, d]);
    }
  }

  private addLayerNorm(prefix: string, d: number): void {
    this.addOnes(`${prefix}.g`, [d]);
    this.addZeros(`${prefix}.b`, [d]);
  }

  private addFfn(rng: Rng, prefix: string, d: number, f: number): void {
    this.add(rng, `${prefix}.ffn.w1`, [d, f]);
    this.addZeros(`${prefix}.ffn.b1`, [f]);
    this.add(rng, `${prefix}.ffn.w2`, [f, d]);
    this.addZeros(`${prefix}.ffn.b2`, [d]);
  }

  w(name: string): tf.Variable {
    const v = this.weights.get(name);
    if (!v) throw new Error(`unknown weight: ${name}`);
    return v;
  }

  // -- parameter groups --------------------------------------------------

  embeddingNames(): string[] {
    return ["embedding"];
  }

  encoderLayerNames(layer: number): string[] {
    return [...this.weights.keys()].filter((n) => n.startsWith(`enc${layer}.`));
  }

  encoderNames(): string[] {
    const out = this.embeddingNames();
    for (let i = 0; i < this.cfg.encoderLayers; i += 1) {
      out.push(...this.encoderLayerNames(i));
    }
    return out;
  }

  decoderNames(): string[] {
    return [...this.weights.keys()].filter(
      (n) => n.startsWith("dec") || n === "outProj" || n === "outBias",
    );
  }

  allNames(): string[] {
    return [...this.weights.keys()];
  }

  /** Hex digest of the exact weight bytes, for freezing-contract checks. */
  weightDigest(names: string[]): string {
    const hash = createHash("sha256");
    for (const name of [...names].sort()) {
      const data = this.w(name).dataSync() as Float32Array;
      hash.update(name);
      hash.update(Buffer.from(data.buffer, data.byteOffset, data.byteLength));
    }
    return hash.digest("hex");
  }

  // -- forward pass ------------------------------------------------------

  private dropout(x: tf.Tensor, training: boolean): tf.Tensor {
    if (!training || this.cfg.dropout === 0) return x;
    this.dropoutCounter += 1;
    return tf.dropout(
      x,
      this.cfg.dropout,
      undefined,
      this.cfg.seed + this.dropoutCounter,
    );
  }

  private layerNorm(x: tf.Tensor, prefix: string): tf.Tensor {
    const mean = tf.mean(x, -1, true);
    const centered = tf.sub(x, mean);
    const variance = tf.mean(tf.square(centered), -1, true);
    const normed = tf.div(centered, tf.sqrt(tf.add(variance, 1e-5)));
    return tf.add(tf.mul(normed, this.w(`${prefix}.g`)), this.w(`${prefix}.b`));
  }

  /** Multi-head attention; mask is [batch, 1, qLen, kLen] with 1 = keep. */
  private attention(
    prefix: string,
    query: tf.Tensor,
    keyValue: tf.Tensor,
    mask: tf.Tensor,
    training: boolean,
  ): tf.Tensor {
    const { heads, embeddingDim } = this.cfg;
    const headDim = embeddingDim / heads;
    const [batch, qLen] = query.shape as number[];
    const kLen = keyValue.shape[1] as number;
    const project = (x: tf.Tensor, name: string, len: number) =>
      tf.transpose(
        tf.reshape(dense3d(x, this.w(`${prefix}.${name}`)), [
          batch,
          len,
          heads,
          headDim,
        ]),
        [0, 2, 1, 3],
      );
    const q = project(query, "wq", qLen);
    const k = project(keyValue, "wk", kLen);
    const v = project(keyValue, "wv", kLen);
    let scores = tf.div(
      tf.matMul(q, k, false, true),
      Math.sqrt(headDim),
    );
    scores = tf.add(scores, tf.mul(tf.sub(mask, 1), 1e9));
    let attn = tf.softmax(scores);
    attn = this.dropout(attn, training);
    const context = tf.transpose(tf.matMul(attn, v), [0, 2, 1, 3]);
    const merged = tf.reshape(context, [batch, qLen, embeddingDim]);
    return dense3d(merged, this.w(`${prefix}.wo`));
  }

  private ffn(x: tf.Tensor, prefix: string, training: boolean): tf.Tensor {
    const hidden = tf.relu(
      tf.add(dense3d(x, this.w(`${prefix}.ffn.w1`)), this.w(`${prefix}.ffn.b1`)),
    );
    return tf.add(
      dense3d(this.dropout(hidden, training), this.w(`${prefix}.ffn.w2`)),
      this.w(`${prefix}.ffn.b2`),
    );
  }

  private embed(ids: tf.Tensor2D): tf.Tensor {
    // oneHot matMul rather than gather: the gather gradient kernel is not
    // available on the wasm backend, and the vocabulary is small
    const oneHot = tf.oneHot(ids, this.vocabSize);
    const emb = dense3d(oneHot, this.w("embedding"));
    const scaled = tf.mul(emb, Math.sqrt(this.cfg.embeddingDim));
    const pe = positionalEncoding(
      ids.shape[1],
      this.cfg.embeddingDim,
    );
    return tf.add(scaled, pe);
  }

  private paddingMask(ids: tf.Tensor2D): tf.Tensor {
    // [batch, 1, 1, len]; 1 where the key is a real token
    const keep = tf.cast(tf.notEqual(ids, this.padId), "float32");
    return tf.reshape(keep, [ids.shape[0], 1, 1, ids.shape[1]]);
  }

  encode(encIds: tf.Tensor2D, training: boolean): tf.Tensor {
    const mask = this.paddingMask(encIds);
    let x = this.dropout(this.embed(encIds), training);
    for (let i = 0; i < this.cfg.encoderLayers; i += 1) {
      const attn = this.attention(`enc${i}.self`, x, x, mask, training);
      x = this.layerNorm(tf.add(x, this.dropout(attn, training)), `enc${i}.ln1`);
      const ff = this.ffn(x, `enc${i}`, training);
      x = this.layerNorm(tf.add(x, this.dropout(ff, training)), `enc${i}.ln2`);
    }
    return x;
  }

  decode(
    decIds: tf.Tensor2D,
    encIds: tf.Tensor2D,
    memory: tf.Tensor,
    training: boolean,
  ): tf.Tensor {
    const [batch, len] = decIds.shape;
    const causal = tf.reshape(
      tf.linalg.bandPart(tf.ones([len, len]), -1, 0),
      [1, 1, len, len],
    );
    const selfMask = tf.mul(
      causal,
      tf.reshape(
        tf.cast(tf.notEqual(decIds, this.padId), "float32"),
        [batch, 1, 1, len],
      ),
    );
    const crossMask = this.paddingMask(encIds);
    let x = this.dropout(this.embed(decIds), training);
    for (let i = 0; i < this.cfg.decoderLayers; i += 1) {
      const self = this.attention(`dec${i}.self`, x, x, selfMask, training);
      x = this.layerNorm(tf.add(x, this.dropout(self, training)), `dec${i}.ln1`);
      const cross = this.attention(
        `dec${i}.cross`,
        x,
        memory,
        crossMask,
        training,
      );
      x = this.layerNorm(tf.add(x, this.dropout(cross, training)), `dec${i}.ln2`);
      const ff = this.ffn(x, `dec${i}`, training);
      x = this.layerNorm(tf.add(x, this.dropout(ff, training)), `dec${i}.ln3`);
    }
    return tf.add(dense3d(x, this.w("outProj")), this.w("outBias"));
  }

  /** Logits [batch, outLen, vocab] under teacher forcing. */
  forward(encIds: tf.Tensor2D, decIds: tf.Tensor2D, training: boolean): tf.Tensor {
    const memory = this.encode(encIds, training);
    return this.decode(decIds, encIds, memory, training);
  }

  // -- checkpointing -----------------------------------------------------

  serialize(): string {
    const payload: Record<string, unknown> = {
      config: this.cfg,
      vocabSize: this.vocabSize,
      padId: this.padId,
      weights: {} as Record<string, { shape: number[]; data: string }>,
    };
    const weights = payload.weights as Record<
      string,
      { shape: number[]; data: string }
    >;
    for (const [name, variable] of this.weights) {
      const data = variable.dataSync() as Float32Array;
      weights[name] = {
        shape: variable.shape.slice(),
        data: Buffer.from(
          data.buffer,
          data.byteOffset,
          data.byteLength,
        ).toString("base64"),
      };
    }
    return JSON.stringify(payload);
  }

  static deserialize(text: string): Transformer {
    const payload = JSON.parse(text);
    const model = new Transformer(payload.config, payload.vocabSize, payload.padId);
    for (const [name, entry] of Object.entries(
      payload.weights as Record<string, { shape: number[]; data: string }>,
    )) {
      const variable = model.w(name);
      const bytes = Buffer.from(entry.data, "base64");
      const data = new Float32Array(
        bytes.buffer,
        bytes.byteOffset,
        bytes.byteLength / 4,
      );
      variable.assign(tf.tensor(Array.from(data), entry.shape));
    }
    return model;
  }

  /** Copy every weight from another model of identical architecture. */
  loadFrom(other: Transformer): void {
    if (other.allNames().join() !== this.allNames().join()) {
      throw new Error("architecture mismatch");
    }
    for (const name of this.allNames()) {
      this.w(name).assign(other.w(name));
    }
  }

  dispose(): void {
    for (const variable of this.weights.values()) variable.dispose();
  }
}
