/**
 * End-to-end tracking: detect the face on the first frame, carve the
 * forehead and nose-mouth regions, seed corners in both, follow every
 * corner through the whole clip, and keep the vertical coordinate per
 * frame. Features lost anywhere along the way are dropped entirely.
 */

import { CornerParams, DEFAULT_CORNER_PARAMS, Point, shiTomasiCorners } from "./corners.js";
import { detectFaceBox } from "./detect.js";
import { Frame, VideoSource } from "./frame.js";
import { DEFAULT_FLOW_PARAMS, FlowParams, buildPyramid, trackPoint } from "./flow.js";
import { Box, RoiGeometry, roiFromFaceBox } from "./geometry.js";

export class InsufficientFeaturesError extends Error {}

export interface TrackerParams {
  corners: CornerParams;
  flow: FlowParams;
  /** fewest features that must survive the whole clip */
  minFeatures: number;
}

export const DEFAULT_TRACKER_PARAMS: TrackerParams = {
  corners: DEFAULT_CORNER_PARAMS,
  flow: DEFAULT_FLOW_PARAMS,
  minFeatures: 10,
};

export interface TrackResult {
  roi: RoiGeometry;
  /** one row per surviving feature, one column per frame: vertical position */
  vertical: Float64Array[];
  /** seed positions of the surviving features on frame 1 */
  seeds: Point[];
  fps: number;
}

export function detectRoi(firstFrame: Frame, faceBox?: Box): RoiGeometry {
  return roiFromFaceBox(faceBox ?? detectFaceBox(firstFrame));
}

export function trackVideo(
  video: VideoSource,
  params: TrackerParams = DEFAULT_TRACKER_PARAMS,
  faceBox?: Box
): TrackResult {
  if (video.frames.length < 2) {
    throw new Error("need at least 2 frames to track");
  }
  const first = video.frames[0];
  const roi = detectRoi(first, faceBox);
  const seeds: Point[] = [
    ...shiTomasiCorners(first, roi.foreheadBox, params.corners),
    ...shiTomasiCorners(first, roi.noseMouthBox, params.corners),
  ];
  if (seeds.length < params.minFeatures) {
    throw new InsufficientFeaturesError(
      `only ${seeds.length} corner features found (need ${params.minFeatures})`
    );
  }
  const nFrames = video.frames.length;
  const tracks: Float64Array[] = seeds.map(() => new Float64Array(nFrames));
  const positions: Point[] = seeds.map((p) => ({ ...p }));
  const alive: boolean[] = seeds.map(() => true);
  seeds.forEach((p, i) => {
    tracks[i][0] = p.y;
  });

  let prevPyr = buildPyramid(first, params.flow.pyramidLevels);
  for (let f = 1; f < nFrames; f++) {
    const nextPyr = buildPyramid(video.frames[f], params.flow.pyramidLevels);
    for (let i = 0; i < positions.length; i++) {
      if (!alive[i]) continue;
      const result = trackPoint(prevPyr, nextPyr, positions[i], params.flow);
      if (!result.ok) {
        alive[i] = false;
        continue;
      }
      positions[i] = result.point;
      tracks[i][f] = result.point.y;
    }
    prevPyr = nextPyr;
  }

  const vertical: Float64Array[] = [];
  const survivingSeeds: Point[] = [];
  for (let i = 0; i < tracks.length; i++) {
    if (alive[i]) {
      vertical.push(tracks[i]);
      survivingSeeds.push(seeds[i]);
    }
  }
  if (vertical.length < params.minFeatures) {
    throw new InsufficientFeaturesError(
      `only ${vertical.length} features survived tracking ` +
        `(need ${params.minFeatures})`
    );
  }
  return { roi, vertical, seeds: survivingSeeds, fps: video.fps };
}
