import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    setupFiles: ["test/setup.ts"],
    testTimeout: 300_000,
    hookTimeout: 120_000,
    // tfjs keeps global state per process; a single fork avoids re-loading
    // the wasm binary for every file and keeps variable names stable.
    pool: "forks",
    poolOptions: { forks: { singleFork: true } },
  },
});
