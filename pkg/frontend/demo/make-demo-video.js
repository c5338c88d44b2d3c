#!/usr/bin/env node
/**
 * Generate a synthetic face clip for trying the full tracker -> estimator
 * loop without camera footage:
 *
 *   node demo/make-demo-video.js /tmp/demo-frames
 *   node dist/cli.js track /tmp/demo-frames --out /tmp/demo.csv --fps 25
 *   pulsemotion estimate /tmp/demo.csv --method jade
 *
 * The "face" is a textured rectangle whose rows bob with a ballistic-like
 * 1.2 Hz pulse (72 bpm) plus slow respiratory sway; the two motions have
 * different vertical profiles, as on a real face, so source separation has
 * distinct mixtures to work with.
 */

import * as fs from "node:fs";
import * as path from "node:path";

function mulberry32(seed) {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const W = 200;
const H = 220;
const FW = 80;
const FH = 110;
const FX = 60;
const FY = 30;
const FPS = 25;
const SECONDS = 30;
const PULSE_HZ = 1.2;
const RESP_HZ = 0.3;

const outDir = process.argv[2];
if (!outDir) {
  console.error("usage: node demo/make-demo-video.js <output-frame-dir>");
  process.exit(1);
}
fs.mkdirSync(outDir, { recursive: true });

const rand = mulberry32(123);
const TW = FW + 2;
const TH = FH + 4;
const tex = new Float64Array(TW * TH);
for (let i = 0; i < tex.length; i++) tex[i] = 150 + (rand() - 0.5) * 90;

const nFrames = FPS * SECONDS;
for (let f = 0; f < nFrames; f++) {
  const t = f / FPS;
  const pulse = Math.tanh(3 * Math.sin(2 * Math.PI * PULSE_HZ * t));
  const resp = Math.sin(2 * Math.PI * RESP_HZ * t);
  const img = Buffer.alloc(W * H, 20);
  for (let v = 0; v < FH; v++) {
    // motion profiles vary down the face: pulse grows toward the jaw,
    // respiration toward the forehead
    const frac = v / FH;
    const dy = (0.35 + 0.65 * frac) * pulse + (1.3 - 0.8 * frac) * resp;
    const sy = v - dy + 2;
    const y0 = Math.floor(sy);
    const ay = sy - y0;
    if (y0 < 0 || y0 + 1 >= TH) continue;
    for (let u = 0; u < FW; u++) {
      const sx = u + 1;
      const val = tex[y0 * TW + sx] * (1 - ay) + tex[(y0 + 1) * TW + sx] * ay;
      img[(FY + v) * W + (FX + u)] = Math.max(0, Math.min(255, Math.round(val)));
    }
  }
  const name = `f${String(f).padStart(4, "0")}.pgm`;
  fs.writeFileSync(
    path.join(outDir, name),
    Buffer.concat([Buffer.from(`P5\n${W} ${H}\n255\n`), img])
  );
}
console.log(`${nFrames} frames (${SECONDS}s at ${FPS} fps, ` +
            `${PULSE_HZ * 60} bpm pulse) -> ${outDir}`);
