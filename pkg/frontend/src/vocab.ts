import { readFileSync } from "node:fs";

/** Vocabulary sidecar written by the pipeline CLI: {nvars, tokens}.
 * Token ids are positions in the fixed token list. */
export class Vocabulary {
  readonly nvars: number;
  readonly tokens: string[];
  private readonly index: Map<string, number>;

  constructor(nvars: number, tokens: string[]) {
    this.nvars = nvars;
    this.tokens = tokens;
    this.index = new Map(tokens.map((t, i) => [t, i]));
    for (const required of ["<s>", "</s>", "<pad>"]) {
      if (!this.index.has(required)) {
        throw new Error(`vocabulary is missing ${required}`);
      }
    }
  }

  static fromFile(path: string): Vocabulary {
    const data = JSON.parse(readFileSync(path, "utf8"));
    if (!Array.isArray(data.tokens) || typeof data.nvars !== "number") {
      throw new Error("vocabulary file must contain nvars and tokens");
    }
    return new Vocabulary(data.nvars, data.tokens);
  }

  get size(): number {
    return this.tokens.length;
  }

  get startId(): number {
    return this.idOf("<s>");
  }

  get endId(): number {
    return this.idOf("</s>");
  }

  get padId(): number {
    return this.idOf("<pad>");
  }

  idOf(token: string): number {
    const id = this.index.get(token);
    if (id === undefined) {
      throw new Error(`token not in vocabulary: ${token}`);
    }
    return id;
  }

  toIds(tokens: string[]): number[] {
    return tokens.map((t) => this.idOf(t));
  }

  fromIds(ids: number[]): string[] {
    return ids.map((i) => {
      const token = this.tokens[i];
      if (token === undefined) {
        throw new Error(`token id out of range: ${i}`);
      }
      return token;
    });
  }

  /** Ids of x1..xn, indexed by variable number minus one. */
  variableIds(): number[] {
    const out: number[] = [];
    for (let v = 1; v <= this.nvars; v += 1) {
      out.push(this.idOf(`x${v}`));
    }
    return out;
  }
}
