/**
 * Shi-Tomasi corner seeding: score pixels by the smaller eigenvalue of the
 * local structure tensor, keep the strongest ones a minimum distance apart.
 */

import { Frame } from "./frame.js";
import { Box } from "./geometry.js";

export interface Point {
  x: number;
  y: number;
}

export interface CornerParams {
  maxCorners: number;
  /** keep corners scoring at least this fraction of the best in the box */
  qualityLevel: number;
  minDistance: number;
  /** structure-tensor window radius (block is (2r+1)^2) */
  blockRadius: number;
}

export const DEFAULT_CORNER_PARAMS: CornerParams = {
  maxCorners: 60,
  qualityLevel: 0.01,
  minDistance: 5,
  blockRadius: 2,
};

export function gradients(frame: Frame): { ix: Float64Array; iy: Float64Array } {
  const { width, height, data } = frame;
  const ix = new Float64Array(width * height);
  const iy = new Float64Array(width * height);
  for (let y = 1; y < height - 1; y++) {
    for (let x = 1; x < width - 1; x++) {
      const i = y * width + x;
      ix[i] = (data[i + 1] - data[i - 1]) / 2;
      iy[i] = (data[i + width] - data[i - width]) / 2;
    }
  }
  return { ix, iy };
}

function integral(src: Float64Array, width: number, height: number): Float64Array {
  // (width+1) x (height+1) summed-area table
  const out = new Float64Array((width + 1) * (height + 1));
  for (let y = 0; y < height; y++) {
    let rowSum = 0;
    for (let x = 0; x < width; x++) {
      rowSum += src[y * width + x];
      out[(y + 1) * (width + 1) + (x + 1)] = out[y * (width + 1) + (x + 1)] + rowSum;
    }
  }
  return out;
}

function windowSum(
  sat: Float64Array,
  width: number,
  x0: number,
  y0: number,
  x1: number,
  y1: number
): number {
  // inclusive box [x0,x1] x [y0,y1]
  const w = width + 1;
  return (
    sat[(y1 + 1) * w + (x1 + 1)] -
    sat[y0 * w + (x1 + 1)] -
    sat[(y1 + 1) * w + x0] +
    sat[y0 * w + x0]
  );
}

/**
 * Strongest corners strictly inside ``box``, ordered by falling score.
 */
export function shiTomasiCorners(
  frame: Frame,
  box: Box,
  params: CornerParams = DEFAULT_CORNER_PARAMS
): Point[] {
  const { width, height } = frame;
  const { ix, iy } = gradients(frame);
  const ixx = new Float64Array(width * height);
  const iyy = new Float64Array(width * height);
  const ixy = new Float64Array(width * height);
  for (let i = 0; i < ix.length; i++) {
    ixx[i] = ix[i] * ix[i];
    iyy[i] = iy[i] * iy[i];
    ixy[i] = ix[i] * iy[i];
  }
  const satXX = integral(ixx, width, height);
  const satYY = integral(iyy, width, height);
  const satXY = integral(ixy, width, height);

  const r = params.blockRadius;
  const xLo = Math.max(Math.ceil(box.x), r + 1);
  const xHi = Math.min(Math.floor(box.x + box.width) - 1, width - r - 2);
  const yLo = Math.max(Math.ceil(box.y), r + 1);
  const yHi = Math.min(Math.floor(box.y + box.height) - 1, height - r - 2);

  const scored: { x: number; y: number; score: number }[] = [];
  let best = 0;
  for (let y = yLo; y <= yHi; y++) {
    for (let x = xLo; x <= xHi; x++) {
      const sxx = windowSum(satXX, width, x - r, y - r, x + r, y + r);
      const syy = windowSum(satYY, width, x - r, y - r, x + r, y + r);
      const sxy = windowSum(satXY, width, x - r, y - r, x + r, y + r);
      const tr = sxx + syy;
      const det = sxx * syy - sxy * sxy;
      const lambdaMin = tr / 2 - Math.sqrt(Math.max(0, (tr * tr) / 4 - det));
      if (lambdaMin > 0) {
        scored.push({ x, y, score: lambdaMin });
        if (lambdaMin > best) best = lambdaMin;
      }
    }
  }
  const cutoff = best * params.qualityLevel;
  scored.sort((a, b) => b.score - a.score || a.y - b.y || a.x - b.x);
  const picked: Point[] = [];
  const minD2 = params.minDistance * params.minDistance;
  for (const c of scored) {
    if (c.score < cutoff || picked.length >= params.maxCorners) break;
    let clear = true;
    for (const p of picked) {
      const dx = p.x - c.x;
      const dy = p.y - c.y;
      if (dx * dx + dy * dy < minD2) {
        clear = false;
        break;
      }
    }
    if (clear) picked.push({ x: c.x, y: c.y });
  }
  return picked;
}
