/**
 * Pyramidal Lucas-Kanade sparse optical flow (Bouguet-style): iterate the
 * 2x2 normal equations of the brightness-constancy residual over a small
 * window, coarse to fine.
 */

import { Frame } from "./frame.js";
import { Point } from "./corners.js";

export interface FlowParams {
  /** window radius; the patch is (2r+1)^2 */
  winRadius: number;
  pyramidLevels: number;
  maxIterations: number;
  /** stop when the update step is shorter than this (pixels) */
  epsilon: number;
  /** reject points whose gradient matrix is near-singular */
  minEigen: number;
  /** reject implausibly large per-frame motion (pixels, finest level) */
  maxDisplacement: number;
}

export const DEFAULT_FLOW_PARAMS: FlowParams = {
  winRadius: 7,
  pyramidLevels: 3,
  maxIterations: 20,
  epsilon: 0.01,
  minEigen: 1e-6,
  maxDisplacement: 20,
};

export function buildPyramid(frame: Frame, levels: number): Frame[] {
  const pyramid = [frame];
  for (let l = 1; l < levels; l++) {
    const prev = pyramid[l - 1];
    const width = Math.floor(prev.width / 2);
    const height = Math.floor(prev.height / 2);
    if (width < 8 || height < 8) break;
    const data = new Float64Array(width * height);
    for (let y = 0; y < height; y++) {
      for (let x = 0; x < width; x++) {
        const i = 2 * y * prev.width + 2 * x;
        data[y * width + x] =
          (prev.data[i] + prev.data[i + 1] + prev.data[i + prev.width] + prev.data[i + prev.width + 1]) / 4;
      }
    }
    pyramid.push({ width, height, data });
  }
  return pyramid;
}

function bilinear(frame: Frame, x: number, y: number): number {
  const x0 = Math.floor(x);
  const y0 = Math.floor(y);
  const ax = x - x0;
  const ay = y - y0;
  const i = y0 * frame.width + x0;
  const d = frame.data;
  return (
    d[i] * (1 - ax) * (1 - ay) +
    d[i + 1] * ax * (1 - ay) +
    d[i + frame.width] * (1 - ax) * ay +
    d[i + frame.width + 1] * ax * ay
  );
}

function inBounds(frame: Frame, x: number, y: number, r: number): boolean {
  return (
    x - r >= 1 && y - r >= 1 && x + r < frame.width - 2 && y + r < frame.height - 2
  );
}

export interface FlowResult {
  ok: boolean;
  point: Point;
}

/**
 * Track one point from ``prevPyr`` to ``nextPyr``; ``ok: false`` when the
 * point leaves the frame, sits on a textureless patch, or jumps too far.
 */
export function trackPoint(
  prevPyr: Frame[],
  nextPyr: Frame[],
  point: Point,
  params: FlowParams = DEFAULT_FLOW_PARAMS
): FlowResult {
  const r = params.winRadius;
  let gx = 0;
  let gy = 0;
  for (let level = prevPyr.length - 1; level >= 0; level--) {
    const prev = prevPyr[level];
    const next = nextPyr[level];
    const scale = 1 << level;
    const px = point.x / scale;
    const py = point.y / scale;
    if (!inBounds(prev, px, py, r)) {
      return { ok: false, point };
    }
    // gradient matrix over the template window in the previous frame
    let sxx = 0;
    let syy = 0;
    let sxy = 0;
    const ixs = new Float64Array((2 * r + 1) * (2 * r + 1));
    const iys = new Float64Array(ixs.length);
    const tmpl = new Float64Array(ixs.length);
    let k = 0;
    for (let dy = -r; dy <= r; dy++) {
      for (let dx = -r; dx <= r; dx++) {
        const sx = px + dx;
        const sy = py + dy;
        const ix = (bilinear(prev, sx + 1, sy) - bilinear(prev, sx - 1, sy)) / 2;
        const iy = (bilinear(prev, sx, sy + 1) - bilinear(prev, sx, sy - 1)) / 2;
        ixs[k] = ix;
        iys[k] = iy;
        tmpl[k] = bilinear(prev, sx, sy);
        sxx += ix * ix;
        syy += iy * iy;
        sxy += ix * iy;
        k++;
      }
    }
    const tr = sxx + syy;
    const det = sxx * syy - sxy * sxy;
    const lambdaMin = tr / 2 - Math.sqrt(Math.max(0, (tr * tr) / 4 - det));
    if (lambdaMin < params.minEigen || det === 0) {
      return { ok: false, point };
    }
    // iterate the flow update at this level
    let vx = gx;
    let vy = gy;
    for (let iter = 0; iter < params.maxIterations; iter++) {
      if (!inBounds(next, px + vx, py + vy, r)) {
        return { ok: false, point };
      }
      let bx = 0;
      let by = 0;
      k = 0;
      for (let dy = -r; dy <= r; dy++) {
        for (let dx = -r; dx <= r; dx++) {
          const it = tmpl[k] - bilinear(next, px + vx + dx, py + vy + dy);
          bx += it * ixs[k];
          by += it * iys[k];
          k++;
        }
      }
      const stepX = (syy * bx - sxy * by) / det;
      const stepY = (sxx * by - sxy * bx) / det;
      vx += stepX;
      vy += stepY;
      if (Math.hypot(stepX, stepY) < params.epsilon) break;
    }
    if (level > 0) {
      gx = 2 * vx;
      gy = 2 * vy;
    } else {
      gx = vx;
      gy = vy;
    }
  }
  if (Math.hypot(gx, gy) > params.maxDisplacement) {
    return { ok: false, point };
  }
  const moved = { x: point.x + gx, y: point.y + gy };
  const finest = nextPyr[0];
  if (!inBounds(finest, moved.x, moved.y, params.winRadius)) {
    return { ok: false, point };
  }
  return { ok: true, point: moved };
}
