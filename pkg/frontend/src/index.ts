/**
 * In-process-feeling bindings for the fsaug toolkit.
 *
 * Every call round-trips through the fsaug CLI and its file formats
 * (PNG, bbox CSV, JSONL records, FMP1 float maps), so results are
 * byte-identical to batch runs with the same (seed, index, config).
 */

import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { ArrayImage, decodePng, encodePng } from "./png.js";

export { ArrayImage, decodePng, encodePng };

export interface RegionBox {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export type StrategyName = "rse" | "cse" | "rcse" | "pse" | "hhse" | "vhse";

export interface AugmentOptions {
  strategy?: StrategyName;
  pApply?: number;
  sliceMin?: number;
  sliceMax?: number;
  pseMax?: number;
  fill?: number;
  /** Skip saliency detection and erase inside this box instead. */
  bbox?: RegionBox;
}

export interface AugmentRecord {
  file: string;
  strategy: string;
  box: [number, number, number, number] | null;
  params: Record<string, unknown>;
  seed: number;
  index: number;
}

export interface SaliencyMap {
  width: number;
  height: number;
  /** Row-major float64 values in [0, 1]. */
  values: Float64Array;
}

export class FsaugError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
  ) {
    super(message);
    this.name = "FsaugError";
  }
}

/** Override with FSAUG_CLI, e.g. "fsaug" for the installed console script. */
function cliCommand(): string[] {
  const env = process.env.FSAUG_CLI;
  if (env) return env.split(" ");
  return ["python3", "-m", "fsaug.cli"];
}

function runCli(args: string[]): string {
  const [cmd, ...base] = cliCommand();
  const res = spawnSync(cmd, [...base, ...args], { encoding: "utf-8" });
  if (res.error) throw res.error;
  if (res.status !== 0) {
    throw new FsaugError(res.stderr.trim() || `fsaug exited with ${res.status}`, res.status ?? -1);
  }
  return res.stdout;
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "fsaug-"));
  try {
    return fn(dir);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

/**
 * Augment one in-memory image with the deterministic stream
 * derived from (seed, index); mirrors a batch run where this image
 * sits at position `index` in sorted order.
 */
export function augment(
  image: ArrayImage,
  seed: number,
  index: number,
  options: AugmentOptions = {},
): { image: ArrayImage; record: AugmentRecord } {
  return withTempDir((dir) => {
    const inDir = path.join(dir, "in");
    const outDir = path.join(dir, "out");
    fs.mkdirSync(inDir);
    const name = "image.png";
    fs.writeFileSync(path.join(inDir, name), encodePng(image));
    const log = path.join(dir, "records.jsonl");
    const args = [
      "augment",
      "--in", inDir,
      "--out", outDir,
      "--seed", String(seed),
      "--index-base", String(index),
      "--log", log,
    ];
    if (options.strategy !== undefined) args.push("--strategy", options.strategy);
    if (options.pApply !== undefined) args.push("--p-apply", String(options.pApply));
    if (options.sliceMin !== undefined) args.push("--slice-min", String(options.sliceMin));
    if (options.sliceMax !== undefined) args.push("--slice-max", String(options.sliceMax));
    if (options.pseMax !== undefined) args.push("--pse-max", String(options.pseMax));
    if (options.fill !== undefined) args.push("--fill", String(options.fill));
    if (options.bbox) {
      const { x0, y0, x1, y1 } = options.bbox;
      const csv = path.join(dir, "bbox.csv");
      fs.writeFileSync(csv, `${name},${x0},${y0},${x1},${y1}\n`);
      args.push("--bbox-file", csv);
    }
    runCli(args);
    const out = decodePng(fs.readFileSync(path.join(outDir, name)));
    const record = JSON.parse(fs.readFileSync(log, "utf-8").trim()) as AugmentRecord;
    return { image: out, record };
  });
}

/** Spectral-residual saliency map, numerically identical to the core pipeline. */
export function saliencyMap(image: ArrayImage): SaliencyMap {
  return withTempDir((dir) => {
    const inDir = path.join(dir, "in");
    const outDir = path.join(dir, "out");
    fs.mkdirSync(inDir);
    fs.writeFileSync(path.join(inDir, "image.png"), encodePng(image));
    runCli(["saliency", "--in", inDir, "--out", outDir, "--emit", "map", "--float-maps"]);
    const raw = fs.readFileSync(path.join(outDir, "image.fmap"));
    if (raw.subarray(0, 4).toString("latin1") !== "FMP1") {
      throw new Error("bad float-map magic");
    }
    const width = raw.readUInt32LE(4);
    const height = raw.readUInt32LE(8);
    const values = new Float64Array(width * height);
    for (let i = 0; i < values.length; i++) values[i] = raw.readDoubleLE(12 + 8 * i);
    return { width, height, values };
  });
}

/** Salient region as a half-open pixel box, matching the CLI's bboxes.csv. */
export function salientBbox(image: ArrayImage): RegionBox {
  return withTempDir((dir) => {
    const inDir = path.join(dir, "in");
    const outDir = path.join(dir, "out");
    fs.mkdirSync(inDir);
    fs.writeFileSync(path.join(inDir, "image.png"), encodePng(image));
    runCli(["saliency", "--in", inDir, "--out", outDir, "--emit", "bbox"]);
    const line = fs.readFileSync(path.join(outDir, "bboxes.csv"), "utf-8").trim();
    const [, x0, y0, x1, y1] = line.split(",");
    return { x0: Number(x0), y0: Number(y0), x1: Number(x1), y1: Number(y1) };
  });
}
