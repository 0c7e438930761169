import * as tf from "@tensorflow/tfjs";
import { setWasmPaths } from "@tensorflow/tfjs-backend-wasm";
import { createRequire } from "node:module";
import { dirname, join } from "node:path";

let initialized: Promise<string> | null = null;

/** Select the fastest available backend: wasm when its binary loads,
 * otherwise the pure-JS cpu backend. Returns the backend name. */
export function initBackend(): Promise<string> {
  if (initialized) return initialized;
  initialized = (async () => {
    try {
      const require = createRequire(import.meta.url);
      const wasmDir = dirname(
        require.resolve("@tensorflow/tfjs-backend-wasm/dist/tfjs-backend-wasm.wasm"),
      );
      setWasmPaths(join(wasmDir, "/"));
      if (await tf.setBackend("wasm")) {
        await tf.ready();
        return "wasm";
      }
    } catch {
      // fall through to cpu
    }
    await tf.setBackend("cpu");
    await tf.ready();
    return "cpu";
  })();
  return initialized;
}
