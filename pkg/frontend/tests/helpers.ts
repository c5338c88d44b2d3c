import { Frame, VideoSource } from "../src/frame.js";

/** deterministic PRNG so tests are reproducible */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface FaceVideoOptions {
  width: number;
  height: number;
  nFrames: number;
  faceX: number;
  faceY: number;
  faceWidth: number;
  faceHeight: number;
  /** vertical translation per frame, pixels */
  dy: number;
  seed: number;
  fps: number;
}

export const DEFAULT_FACE_VIDEO: FaceVideoOptions = {
  width: 160,
  height: 170,
  nFrames: 30,
  faceX: 45,
  faceY: 20,
  faceWidth: 64,
  faceHeight: 84,
  dy: 0.0,
  seed: 42,
  fps: 25.0,
};

/**
 * Bright textured rectangle ("face") over a dark background, optionally
 * translating vertically by ``dy`` px/frame. The texture rides with the
 * face so point tracking has something to lock onto.
 */
export function makeFaceVideo(options: Partial<FaceVideoOptions> = {}): VideoSource {
  const o = { ...DEFAULT_FACE_VIDEO, ...options };
  const rand = mulberry32(o.seed);
  const texture = new Float64Array(o.faceWidth * o.faceHeight);
  for (let i = 0; i < texture.length; i++) {
    texture[i] = 150 + (rand() - 0.5) * 90;
  }
  const frames: Frame[] = [];
  for (let f = 0; f < o.nFrames; f++) {
    const data = new Float64Array(o.width * o.height).fill(20);
    const top = o.faceY + f * o.dy;
    for (let v = 0; v < o.faceHeight; v++) {
      const y = Math.round(top) + v;
      if (y < 0 || y >= o.height) continue;
      for (let u = 0; u < o.faceWidth; u++) {
        const x = o.faceX + u;
        data[y * o.width + x] = texture[v * o.faceWidth + u];
      }
    }
    frames.push({ width: o.width, height: o.height, data });
  }
  return { fps: o.fps, frames };
}
