import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { trajectoriesToCsv } from "../src/csv.js";
import { DEFAULT_TRACKER_PARAMS, trackVideo } from "../src/track.js";
import { makeFaceVideo } from "./helpers.js";

describe("trajectory CSV", () => {
  it("carries the fps/origin header and one row per frame", () => {
    const rows = [new Float64Array([1.5, 2.25, 3.125]), new Float64Array([7, 8, 9])];
    const csv = trajectoriesToCsv(rows, 25.0);
    const lines = csv.trimEnd().split("\n");
    expect(lines[0]).toMatch(/^# fps=25 origin=raw/);
    expect(lines[1]).toBe("frame,f0,f1");
    expect(lines[2]).toBe("0,1.5,7");
    expect(lines[3]).toBe("1,2.25,8");
    expect(lines.length).toBe(2 + 3);
  });

  it("echoes tracker parameters into the header comment", () => {
    const rows = [new Float64Array([1, 2])];
    const csv = trajectoriesToCsv(rows, 25.0, DEFAULT_TRACKER_PARAMS);
    expect(csv.split("\n")[0]).toContain("quality=0.01");
    expect(csv.split("\n")[0]).toContain("winRadius=7");
  });

  it("round-trips through the estimation pipeline's parser", { timeout: 60000 }, () => {
    const probe = spawnSync("python3", ["-c", "import pulsemotion"]);
    if (probe.status !== 0) {
      console.warn("pulsemotion not importable; skipping cross-validation");
      return;
    }
    const result = trackVideo(makeFaceVideo({ dy: 1.0 }));
    const csv = trajectoriesToCsv(result.vertical, result.fps, DEFAULT_TRACKER_PARAMS);
    const file = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "traj-")), "t.csv");
    fs.writeFileSync(file, csv);
    const check = spawnSync("python3", [
      "-c",
      [
        "import sys",
        "import numpy as np",
        "from pulsemotion import read_trajectories",
        `traj = read_trajectories(${JSON.stringify(file)})`,
        "assert traj.origin == 'raw'",
        "assert traj.sample_rate == 25.0",
        // bit-exact: every emitted decimal parses back to the same double
        "rows = [line.split(',')[1:] for line in open(" +
          `${JSON.stringify(file)}).read().splitlines()[2:] if line]`,
        "vals = np.array([[float(v) for v in row] for row in rows]).T",
        "assert np.array_equal(vals, traj.data)",
        "print(traj.n_features, traj.n_samples)",
      ].join("\n"),
    ]);
    expect(check.stderr.toString()).toBe("");
    expect(check.status).toBe(0);
    const [nFeatures, nFrames] = check.stdout.toString().trim().split(" ").map(Number);
    expect(nFeatures).toBe(result.vertical.length);
    expect(nFrames).toBe(result.vertical[0].length);
    // the estimation CLI validates it too (track-ingest)
    const ingest = spawnSync("python3", ["-m", "pulsemotion.cli", "track-ingest", file]);
    expect(ingest.status).toBe(0);
  });
});
