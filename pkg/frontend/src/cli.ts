#!/usr/bin/env node
/**
 * pulse-track: convert a face video into a trajectory CSV.
 *
 *   pulse-track track <video> --out trajectories.csv [--params file]
 *               [--fps N] [--face-box x,y,w,h]
 *
 * <video> is a .y4m file (fps from its header) or a directory of .pgm
 * frames (fps from --fps, default 25). Validate the output with the
 * estimation pipeline's `pulsemotion track-ingest`.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { trajectoriesToCsv } from "./csv.js";
import { loadVideo } from "./frame.js";
import { Box } from "./geometry.js";
import { DEFAULT_TRACKER_PARAMS, TrackerParams, trackVideo } from "./track.js";

function usage(): never {
  console.error(
    "usage: pulse-track track <video> --out <trajectories.csv> " +
      "[--params <file>] [--fps <n>] [--face-box x,y,w,h]"
  );
  process.exit(1);
}

function loadParams(file?: string): TrackerParams {
  const params: TrackerParams = {
    corners: { ...DEFAULT_TRACKER_PARAMS.corners },
    flow: { ...DEFAULT_TRACKER_PARAMS.flow },
    minFeatures: DEFAULT_TRACKER_PARAMS.minFeatures,
  };
  if (!file) return params;
  const raw = JSON.parse(fs.readFileSync(file, "utf-8"));
  for (const [section, target] of [
    ["corners", params.corners],
    ["flow", params.flow],
  ] as const) {
    for (const [key, value] of Object.entries(raw[section] ?? {})) {
      if (!(key in target)) {
        throw new Error(`unknown ${section} parameter '${key}'`);
      }
      (target as unknown as Record<string, unknown>)[key] = value;
    }
  }
  if (raw.minFeatures !== undefined) params.minFeatures = raw.minFeatures;
  return params;
}

function parseFaceBox(spec: string): Box {
  const parts = spec.split(",").map(Number);
  if (parts.length !== 4 || parts.some((v) => !Number.isFinite(v))) {
    throw new Error(`--face-box expects x,y,w,h, got '${spec}'`);
  }
  return { x: parts[0], y: parts[1], width: parts[2], height: parts[3] };
}

export function main(argv: string[]): number {
  if (argv.length < 2 || argv[0] !== "track") usage();
  const video = argv[1];
  let out: string | undefined;
  let paramsFile: string | undefined;
  let fps = 25.0;
  let faceBox: Box | undefined;
  for (let i = 2; i < argv.length; i++) {
    const arg = argv[i];
    const value = () => {
      if (i + 1 >= argv.length) usage();
      return argv[++i];
    };
    if (arg === "--out") out = value();
    else if (arg === "--params") paramsFile = value();
    else if (arg === "--fps") fps = Number(value());
    else if (arg === "--face-box") faceBox = parseFaceBox(value());
    else usage();
  }
  if (!out) usage();
  try {
    const params = loadParams(paramsFile);
    const source = loadVideo(video, fps);
    const result = trackVideo(source, params, faceBox);
    fs.mkdirSync(path.dirname(path.resolve(out)), { recursive: true });
    fs.writeFileSync(out, trajectoriesToCsv(result.vertical, result.fps, params));
    console.log(
      `tracked ${result.vertical.length} features over ` +
        `${source.frames.length} frames at ${result.fps} fps -> ${out}`
    );
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

if (process.argv[1] && /cli\.[jt]s$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
