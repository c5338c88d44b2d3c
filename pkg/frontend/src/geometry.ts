/**
 * Face-region carving. From a detected face box, keep the middle 50% of
 * the width and the top 90% of the height, then split off the forehead
 * (top 25% of the adjusted height) and the nose-mouth region (bottom 55%),
 * leaving the eye band between them excluded so blinking cannot leak into
 * the trajectories.
 */

export interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface RoiGeometry {
  faceBox: Box;
  adjustedBox: Box;
  foreheadBox: Box;
  noseMouthBox: Box;
}

export const WIDTH_KEEP = 0.5;
export const HEIGHT_KEEP = 0.9;
export const FOREHEAD_FRACTION = 0.25;
export const NOSEMOUTH_FRACTION = 0.55;

export function roiFromFaceBox(faceBox: Box): RoiGeometry {
  if (faceBox.width <= 0 || faceBox.height <= 0) {
    throw new Error(`degenerate face box ${JSON.stringify(faceBox)}`);
  }
  const adjusted: Box = {
    x: faceBox.x + faceBox.width * (1 - WIDTH_KEEP) / 2,
    y: faceBox.y,
    width: faceBox.width * WIDTH_KEEP,
    height: faceBox.height * HEIGHT_KEEP,
  };
  const forehead: Box = {
    x: adjusted.x,
    y: adjusted.y,
    width: adjusted.width,
    height: adjusted.height * FOREHEAD_FRACTION,
  };
  const noseMouthHeight = adjusted.height * NOSEMOUTH_FRACTION;
  const noseMouth: Box = {
    x: adjusted.x,
    y: adjusted.y + adjusted.height - noseMouthHeight,
    width: adjusted.width,
    height: noseMouthHeight,
  };
  return { faceBox, adjustedBox: adjusted, foreheadBox: forehead, noseMouthBox: noseMouth };
}

export function boxContains(outer: Box, inner: Box): boolean {
  return (
    inner.x >= outer.x &&
    inner.y >= outer.y &&
    inner.x + inner.width <= outer.x + outer.width + 1e-9 &&
    inner.y + inner.height <= outer.y + outer.height + 1e-9
  );
}

export function boxesDisjoint(a: Box, b: Box): boolean {
  return (
    a.x + a.width <= b.x ||
    b.x + b.width <= a.x ||
    a.y + a.height <= b.y ||
    b.y + b.height <= a.y
  );
}
