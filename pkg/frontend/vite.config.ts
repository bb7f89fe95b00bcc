import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "dist",
    sourcemap: true,
  },
  test: {
    environment: "jsdom", // integration files opt into node via a docblock
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
