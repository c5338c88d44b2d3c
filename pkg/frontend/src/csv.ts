/**
 * Trajectory CSV emission in the format the estimation pipeline consumes:
 *
 *   # fps=<float> origin=raw <echoed tracker parameters>
 *   frame,f0,f1,...
 *   0,<y positions...>
 *
 * Numbers use the shortest round-trip decimal form, so parsing the file
 * back yields bit-identical values.
 */

import { TrackerParams } from "./track.js";

export function trajectoriesToCsv(
  vertical: ArrayLike<number>[],
  fps: number,
  params?: TrackerParams
): string {
  if (vertical.length === 0 || vertical[0].length < 2) {
    throw new Error("need at least one feature and two frames");
  }
  const nFrames = vertical[0].length;
  let header = `# fps=${fps} origin=raw`;
  if (params) {
    header +=
      ` maxCorners=${params.corners.maxCorners}` +
      ` quality=${params.corners.qualityLevel}` +
      ` minDistance=${params.corners.minDistance}` +
      ` winRadius=${params.flow.winRadius}` +
      ` pyramidLevels=${params.flow.pyramidLevels}`;
  }
  const lines = [header];
  lines.push("frame," + vertical.map((_, i) => `f${i}`).join(","));
  for (let f = 0; f < nFrames; f++) {
    const row = [String(f)];
    for (const track of vertical) {
      row.push(String(track[f]));
    }
    lines.push(row.join(","));
  }
  return lines.join("\n") + "\n";
}
