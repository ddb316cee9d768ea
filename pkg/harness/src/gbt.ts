/**
 * Histogram-based gradient-boosted trees, second-order (XGBoost-style)
 * splits, depth-capped at 6 by default.
 *
 * Training reserves a seeded 10% validation slice and stops once the
 * validation loss has not improved for `patience` rounds, keeping the
 * model at its best round. Everything is deterministic for a fixed
 * seed; training is single-threaded on purpose so wall-clock timings
 * mean something.
 */

import { TrainingFailure } from "./errors.js";

export interface GbtParams {
  maxDepth: number;
  rounds: number;
  learningRate: number;
  /** L2 regularization on leaf weights */
  lambda: number;
  /** minimum hessian sum on each side of a split */
  minChildWeight: number;
  /** histogram resolution per feature */
  bins: number;
  validationFraction: number;
  patience: number;
  seed: number;
}

export const DEFAULT_PARAMS: GbtParams = {
  maxDepth: 6,
  rounds: 60,
  learningRate: 0.3,
  lambda: 1.0,
  minChildWeight: 1.0,
  bins: 32,
  validationFraction: 0.1,
  patience: 10,
  seed: 17,
};

// flat node arrays; feature[i] < 0 marks a leaf holding value[i]
export interface Tree {
  feature: number[];
  cut: number[];
  left: number[];
  right: number[];
  value: number[];
}

function predictTreeAt(tree: Tree, data: ArrayLike<number>, base: number): number {
  let node = 0;
  while (tree.feature[node] >= 0) {
    node = data[base + tree.feature[node]] <= tree.cut[node]
      ? tree.left[node]
      : tree.right[node];
  }
  return tree.value[node];
}

export function predictTree(tree: Tree, vector: ArrayLike<number>): number {
  return predictTreeAt(tree, vector, 0);
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function shuffled(n: number, seed: number): number[] {
  const order = Array.from({ length: n }, (_, i) => i);
  const rand = mulberry32(seed);
  for (let i = n - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [order[i], order[j]] = [order[j], order[i]];
  }
  return order;
}

interface BinnedMatrix {
  rows: number;
  cols: number;
  codes: Uint8Array; // rows x cols, row-major
  cuts: Float64Array[]; // per feature, ascending thresholds between bins
}

function upperBound(cuts: Float64Array, value: number): number {
  let lo = 0, hi = cuts.length;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (value <= cuts[mid]) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

/** Quantile-ish global binning; exact when a feature has few distinct values. */
export function binMatrix(
  x: Float64Array, rows: number, cols: number, maxBins: number,
): BinnedMatrix {
  const codes = new Uint8Array(rows * cols);
  const cuts: Float64Array[] = [];
  const column = new Float64Array(rows);
  for (let f = 0; f < cols; f++) {
    for (let r = 0; r < rows; r++) column[r] = x[r * cols + f];
    const sorted = Float64Array.from(column).sort();
    const distinct: number[] = [];
    for (let i = 0; i < rows; i++) {
      if (i === 0 || sorted[i] !== sorted[i - 1]) distinct.push(sorted[i]);
    }
    let thresholds: number[];
    if (distinct.length <= maxBins) {
      thresholds = [];
      for (let i = 0; i + 1 < distinct.length; i++) {
        thresholds.push((distinct[i] + distinct[i + 1]) / 2);
      }
    } else {
      const seen = new Set<number>();
      thresholds = [];
      for (let b = 1; b < maxBins; b++) {
        const v = sorted[Math.floor((b * rows) / maxBins)];
        if (!seen.has(v)) {
          seen.add(v);
          thresholds.push(v);
        }
      }
      thresholds.sort((a, b) => a - b);
    }
    const featureCuts = Float64Array.from(thresholds);
    cuts.push(featureCuts);
    for (let r = 0; r < rows; r++) {
      codes[r * cols + f] = upperBound(featureCuts, column[r]);
    }
  }
  return { rows, cols, codes, cuts };
}

function buildTree(
  binned: BinnedMatrix, grad: Float64Array, hess: Float64Array,
  rowIds: Int32Array, params: GbtParams,
): Tree {
  const tree: Tree = { feature: [], cut: [], left: [], right: [], value: [] };

  const newNode = (): number => {
    tree.feature.push(-1);
    tree.cut.push(0);
    tree.left.push(-1);
    tree.right.push(-1);
    tree.value.push(0);
    return tree.feature.length - 1;
  };

  const grow = (ids: Int32Array, depth: number): number => {
    const node = newNode();
    let g = 0, h = 0;
    for (const r of ids) {
      g += grad[r];
      h += hess[r];
    }

    let bestGain = 0;
    let bestFeature = -1, bestBin = -1;
    if (depth < params.maxDepth && ids.length >= 2) {
      const parentScore = (g * g) / (h + params.lambda);
      for (let f = 0; f < binned.cols; f++) {
        const nBins = binned.cuts[f].length + 1;
        if (nBins < 2) continue;
        const gHist = new Float64Array(nBins);
        const hHist = new Float64Array(nBins);
        for (const r of ids) {
          const code = binned.codes[r * binned.cols + f];
          gHist[code] += grad[r];
          hHist[code] += hess[r];
        }
        let gl = 0, hl = 0;
        for (let b = 0; b + 1 < nBins; b++) {
          gl += gHist[b];
          hl += hHist[b];
          const gr = g - gl, hr = h - hl;
          if (hl < params.minChildWeight || hr < params.minChildWeight) continue;
          const gain = (gl * gl) / (hl + params.lambda)
            + (gr * gr) / (hr + params.lambda) - parentScore;
          if (gain > bestGain + 1e-12) {
            bestGain = gain;
            bestFeature = f;
            bestBin = b;
          }
        }
      }
    }

    if (bestFeature < 0) {
      tree.value[node] = (-g / (h + params.lambda)) * params.learningRate;
      return node;
    }

    const leftIds: number[] = [];
    const rightIds: number[] = [];
    for (const r of ids) {
      if (binned.codes[r * binned.cols + bestFeature] <= bestBin) leftIds.push(r);
      else rightIds.push(r);
    }
    tree.feature[node] = bestFeature;
    tree.cut[node] = binned.cuts[bestFeature][bestBin];
    tree.left[node] = grow(Int32Array.from(leftIds), depth + 1);
    tree.right[node] = grow(Int32Array.from(rightIds), depth + 1);
    return node;
  };

  grow(rowIds, 0);
  return tree;
}

function splitRows(
  rows: number, params: GbtParams,
): { train: Int32Array; valid: Int32Array } {
  // tiny tables train on everything; early stopping needs a real slice
  const validCount = Math.floor(rows * params.validationFraction);
  if (validCount < 1 || rows - validCount < 2) {
    return { train: Int32Array.from(shuffled(rows, params.seed)), valid: new Int32Array(0) };
  }
  const order = shuffled(rows, params.seed);
  return {
    train: Int32Array.from(order.slice(validCount)),
    valid: Int32Array.from(order.slice(0, validCount)),
  };
}

export interface Regressor {
  kind: "regressor";
  baseScore: number;
  trees: Tree[];
  roundsUsed: number;
  stoppedEarly: boolean;
}

export function trainRegressor(
  x: Float64Array, y: Float64Array, rows: number, cols: number,
  params: GbtParams = DEFAULT_PARAMS,
): Regressor {
  if (rows === 0) throw new TrainingFailure("no training rows");
  const binned = binMatrix(x, rows, cols, params.bins);
  const { train, valid } = splitRows(rows, params);

  let baseScore = 0;
  for (const r of train) baseScore += y[r];
  baseScore /= train.length;

  const pred = new Float64Array(rows).fill(baseScore);
  const grad = new Float64Array(rows);
  const hess = new Float64Array(rows).fill(1);

  const trees: Tree[] = [];
  let bestLoss = Infinity;
  let bestRound = -1;
  let stoppedEarly = false;

  for (let round = 0; round < params.rounds; round++) {
    for (const r of train) grad[r] = pred[r] - y[r];
    const tree = buildTree(binned, grad, hess, train, params);
    trees.push(tree);
    for (let r = 0; r < rows; r++) {
      pred[r] += predictTreeAt(tree, x, r * cols);
    }
    if (valid.length > 0) {
      let sq = 0;
      for (const r of valid) sq += (pred[r] - y[r]) ** 2;
      const loss = Math.sqrt(sq / valid.length);
      if (loss < bestLoss - 1e-12) {
        bestLoss = loss;
        bestRound = round;
      } else if (round - bestRound >= params.patience) {
        stoppedEarly = true;
        break;
      }
    }
  }

  const keep = valid.length > 0 && bestRound >= 0 ? bestRound + 1 : trees.length;
  return {
    kind: "regressor",
    baseScore,
    trees: trees.slice(0, keep),
    roundsUsed: keep,
    stoppedEarly,
  };
}

export function predictRegressor(model: Regressor, vector: ArrayLike<number>): number {
  let score = model.baseScore;
  for (const tree of model.trees) score += predictTree(tree, vector);
  return score;
}

export interface Classifier {
  kind: "classifier";
  classes: string[];
  /** trees[round][classIndex] */
  trees: Tree[][];
  roundsUsed: number;
  stoppedEarly: boolean;
}

export function trainClassifier(
  x: Float64Array, labels: string[], rows: number, cols: number,
  params: GbtParams = DEFAULT_PARAMS,
): Classifier {
  if (rows === 0) throw new TrainingFailure("no training rows");
  const classes = [...new Set(labels)].sort();
  const classIndex = new Map(classes.map((c, i) => [c, i]));
  const k = classes.length;
  const target = Int32Array.from(labels, (label) => classIndex.get(label)!);

  if (k === 1) {
    return { kind: "classifier", classes, trees: [], roundsUsed: 0, stoppedEarly: false };
  }

  const binned = binMatrix(x, rows, cols, params.bins);
  const { train, valid } = splitRows(rows, params);

  const margins = new Float64Array(rows * k);
  const probs = new Float64Array(rows * k);
  const grad = new Float64Array(rows);
  const hess = new Float64Array(rows);

  const refreshProbs = (ids: Int32Array) => {
    for (const r of ids) {
      let max = -Infinity;
      for (let c = 0; c < k; c++) max = Math.max(max, margins[r * k + c]);
      let sum = 0;
      for (let c = 0; c < k; c++) {
        const e = Math.exp(margins[r * k + c] - max);
        probs[r * k + c] = e;
        sum += e;
      }
      for (let c = 0; c < k; c++) probs[r * k + c] /= sum;
    }
  };

  const rounds: Tree[][] = [];
  let bestLoss = Infinity;
  let bestRound = -1;
  let stoppedEarly = false;

  for (let round = 0; round < params.rounds; round++) {
    refreshProbs(train);
    const roundTrees: Tree[] = [];
    for (let c = 0; c < k; c++) {
      for (const r of train) {
        const p = probs[r * k + c];
        grad[r] = p - (target[r] === c ? 1 : 0);
        hess[r] = Math.max(p * (1 - p), 1e-6);
      }
      const tree = buildTree(binned, grad, hess, train, params);
      roundTrees.push(tree);
      for (let r = 0; r < rows; r++) {
        margins[r * k + c] += predictTreeAt(tree, x, r * cols);
      }
    }
    rounds.push(roundTrees);

    if (valid.length > 0) {
      refreshProbs(valid);
      let loss = 0;
      for (const r of valid) {
        loss += -Math.log(Math.max(probs[r * k + target[r]], 1e-12));
      }
      loss /= valid.length;
      if (loss < bestLoss - 1e-12) {
        bestLoss = loss;
        bestRound = round;
      } else if (round - bestRound >= params.patience) {
        stoppedEarly = true;
        break;
      }
    }
  }

  const keep = valid.length > 0 && bestRound >= 0 ? bestRound + 1 : rounds.length;
  return {
    kind: "classifier",
    classes,
    trees: rounds.slice(0, keep),
    roundsUsed: keep,
    stoppedEarly,
  };
}

export function predictClassifier(model: Classifier, vector: ArrayLike<number>): string {
  if (model.classes.length === 1) return model.classes[0];
  const scores = new Float64Array(model.classes.length);
  for (const roundTrees of model.trees) {
    for (let c = 0; c < roundTrees.length; c++) {
      scores[c] += predictTree(roundTrees[c], vector);
    }
  }
  let best = 0;
  for (let c = 1; c < scores.length; c++) {
    // ties go to the lexicographically smaller class, i.e. the earlier index
    if (scores[c] > scores[best]) best = c;
  }
  return model.classes[best];
}
