import { describe, expect, it } from "vitest";

import {
  DEFAULT_PARAMS,
  predictClassifier,
  predictRegressor,
  trainClassifier,
  trainRegressor,
} from "../src/gbt.js";

function mulberry(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("regressor", () => {
  it("learns a step function", () => {
    const rand = mulberry(3);
    const rows = 400;
    const x = new Float64Array(rows * 2);
    const y = new Float64Array(rows);
    for (let r = 0; r < rows; r++) {
      x[r * 2] = rand();
      x[r * 2 + 1] = rand(); // irrelevant column
      y[r] = x[r * 2] > 0.5 ? 100 : 10;
    }
    const model = trainRegressor(x, y, rows, 2, { ...DEFAULT_PARAMS, rounds: 40 });
    // shrinkage plus early stopping leaves a small residual toward the mean
    expect(predictRegressor(model, [0.9, 0.1])).toBeGreaterThan(90);
    expect(predictRegressor(model, [0.1, 0.9])).toBeLessThan(20);
  });

  it("stops once the validation loss flatlines", () => {
    const rows = 200;
    const x = new Float64Array(rows * 1);
    const y = new Float64Array(rows).fill(42); // nothing to learn
    for (let r = 0; r < rows; r++) x[r] = r;
    const model = trainRegressor(x, y, rows, 1, { ...DEFAULT_PARAMS, rounds: 60 });
    expect(model.stoppedEarly).toBe(true);
    expect(model.roundsUsed).toBeLessThan(60);
    expect(predictRegressor(model, [17])).toBeCloseTo(42, 6);
  });

  it("is deterministic for a fixed seed", () => {
    const rand = mulberry(9);
    const rows = 150;
    const x = new Float64Array(rows * 3);
    const y = new Float64Array(rows);
    for (let r = 0; r < rows; r++) {
      for (let f = 0; f < 3; f++) x[r * 3 + f] = rand();
      y[r] = 5 * x[r * 3] - 2 * x[r * 3 + 1] + rand() * 0.1;
    }
    const a = trainRegressor(x, y, rows, 3, { ...DEFAULT_PARAMS, rounds: 15 });
    const b = trainRegressor(x, y, rows, 3, { ...DEFAULT_PARAMS, rounds: 15 });
    const probe = [0.3, 0.7, 0.5];
    expect(predictRegressor(a, probe)).toBe(predictRegressor(b, probe));
  });
});

describe("classifier", () => {
  it("learns xor, which a depth-1 model cannot", () => {
    const rows = 200;
    const x = new Float64Array(rows * 2);
    const labels: string[] = [];
    for (let r = 0; r < rows; r++) {
      const a = r % 2;
      const b = (r >> 1) % 2;
      x[r * 2] = a;
      x[r * 2 + 1] = b;
      labels.push(a !== b ? "odd" : "even");
    }
    const model = trainClassifier(x, labels, rows, 2,
      { ...DEFAULT_PARAMS, rounds: 30 });
    expect(predictClassifier(model, [0, 0])).toBe("even");
    expect(predictClassifier(model, [1, 1])).toBe("even");
    expect(predictClassifier(model, [0, 1])).toBe("odd");
    expect(predictClassifier(model, [1, 0])).toBe("odd");
  });

  it("handles a single-class table", () => {
    const x = new Float64Array([1, 2, 3]);
    const model = trainClassifier(x, ["only", "only", "only"], 3, 1);
    expect(model.roundsUsed).toBe(0);
    expect(predictClassifier(model, [99])).toBe("only");
  });

  it("separates three classes on one numeric feature", () => {
    const rows = 300;
    const x = new Float64Array(rows);
    const labels: string[] = [];
    const rand = mulberry(5);
    for (let r = 0; r < rows; r++) {
      const v = rand() * 3;
      x[r] = v;
      labels.push(v < 1 ? "low" : v < 2 ? "mid" : "high");
    }
    const model = trainClassifier(x, labels, rows, 1,
      { ...DEFAULT_PARAMS, rounds: 25 });
    expect(predictClassifier(model, [0.4])).toBe("low");
    expect(predictClassifier(model, [1.5])).toBe("mid");
    expect(predictClassifier(model, [2.7])).toBe("high");
  });
});
