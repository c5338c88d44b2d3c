export { Frame, VideoSource, loadVideo, parsePgm, parseY4m, writePgm } from "./frame.js";
export { Box, RoiGeometry, boxContains, boxesDisjoint, roiFromFaceBox } from "./geometry.js";
export { NoFaceError, detectFaceBox } from "./detect.js";
export { CornerParams, DEFAULT_CORNER_PARAMS, Point, shiTomasiCorners } from "./corners.js";
export { DEFAULT_FLOW_PARAMS, FlowParams, buildPyramid, trackPoint } from "./flow.js";
export {
  DEFAULT_TRACKER_PARAMS,
  InsufficientFeaturesError,
  TrackResult,
  TrackerParams,
  detectRoi,
  trackVideo,
} from "./track.js";
export { trajectoriesToCsv } from "./csv.js";
