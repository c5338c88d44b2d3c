/**
 * Face localization on the first frame.
 *
 * This is a brightness-blob detector sized for the controlled footage the
 * tracker targets (evenly lit frontal face against a darker background):
 * Otsu-threshold the luminance, take connected bright regions, keep the
 * largest plausible one. For footage it cannot handle, pass an explicit
 * face box (``--face-box``) instead.
 */

import { Frame } from "./frame.js";
import { Box } from "./geometry.js";

export class NoFaceError extends Error {}

/** minimum fraction of the frame a candidate region must cover */
const MIN_AREA_FRACTION = 0.005;

function otsuThreshold(frame: Frame): number {
  const hist = new Float64Array(256);
  for (let i = 0; i < frame.data.length; i++) {
    const v = Math.max(0, Math.min(255, Math.round(frame.data[i])));
    hist[v]++;
  }
  const total = frame.data.length;
  let sumAll = 0;
  for (let v = 0; v < 256; v++) sumAll += v * hist[v];
  let best = 127;
  let bestVar = -1;
  let wB = 0;
  let sumB = 0;
  for (let v = 0; v < 256; v++) {
    wB += hist[v];
    if (wB === 0) continue;
    const wF = total - wB;
    if (wF === 0) break;
    sumB += v * hist[v];
    const mB = sumB / wB;
    const mF = (sumAll - sumB) / wF;
    const between = wB * wF * (mB - mF) * (mB - mF);
    if (between > bestVar) {
      bestVar = between;
      best = v;
    }
  }
  return best;
}

interface Component {
  area: number;
  box: Box;
}

function brightComponents(frame: Frame, threshold: number): Component[] {
  const { width, height, data } = frame;
  const labels = new Int32Array(width * height); // 0 = unvisited
  const components: Component[] = [];
  const stack: number[] = [];
  let label = 0;
  for (let start = 0; start < data.length; start++) {
    if (labels[start] !== 0 || data[start] <= threshold) continue;
    label++;
    let area = 0;
    let minX = width;
    let maxX = -1;
    let minY = height;
    let maxY = -1;
    stack.push(start);
    labels[start] = label;
    while (stack.length > 0) {
      const idx = stack.pop()!;
      const x = idx % width;
      const y = (idx / width) | 0;
      area++;
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
      const neighbors = [idx - 1, idx + 1, idx - width, idx + width];
      for (const n of neighbors) {
        if (n < 0 || n >= data.length || labels[n] !== 0) continue;
        if ((n === idx - 1 && x === 0) || (n === idx + 1 && x === width - 1)) continue;
        if (data[n] > threshold) {
          labels[n] = label;
          stack.push(n);
        }
      }
    }
    components.push({
      area,
      box: { x: minX, y: minY, width: maxX - minX + 1, height: maxY - minY + 1 },
    });
  }
  return components;
}

/**
 * Bounding box of the dominant bright region of the frame. Throws
 * NoFaceError when nothing plausible is found; warns and keeps the largest
 * when several candidates qualify.
 */
export function detectFaceBox(frame: Frame): Box {
  const threshold = otsuThreshold(frame);
  const minArea = frame.width * frame.height * MIN_AREA_FRACTION;
  const candidates = brightComponents(frame, threshold).filter(
    (c) => c.area >= minArea
  );
  if (candidates.length === 0) {
    throw new NoFaceError(
      "no face-sized bright region found; supply --face-box for this footage"
    );
  }
  candidates.sort((a, b) => b.area - a.area);
  if (candidates.length > 1) {
    console.warn(
      `detect: ${candidates.length} candidate regions, keeping the largest`
    );
  }
  return candidates[0].box;
}
