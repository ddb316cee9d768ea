import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    globalSetup: "tests/global_setup.ts",
    testTimeout: 180_000,
    hookTimeout: 180_000,
  },
});
