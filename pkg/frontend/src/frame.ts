/**
 * Grayscale frame containers and video decoding (Y4M files and PGM frame
 * directories). Only luminance is used downstream: tracking runs on
 * intensity, and the pipeline consumes vertical positions alone.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface Frame {
  width: number;
  height: number;
  /** row-major luminance, one value per pixel */
  data: Float64Array;
}

export interface VideoSource {
  fps: number;
  frames: Frame[];
}

export function frameFromBytes(
  width: number,
  height: number,
  bytes: Uint8Array
): Frame {
  const data = new Float64Array(width * height);
  for (let i = 0; i < data.length; i++) {
    data[i] = bytes[i];
  }
  return { width, height, data };
}

/** Parse a binary (P5) PGM image. */
export function parsePgm(buffer: Buffer): Frame {
  let offset = 0;
  const token = (): string => {
    while (offset < buffer.length) {
      const c = buffer[offset];
      if (c === 0x23) {
        // comment until end of line
        while (offset < buffer.length && buffer[offset] !== 0x0a) offset++;
      } else if (c === 0x20 || c === 0x09 || c === 0x0a || c === 0x0d) {
        offset++;
      } else {
        break;
      }
    }
    const start = offset;
    while (
      offset < buffer.length &&
      ![0x20, 0x09, 0x0a, 0x0d].includes(buffer[offset])
    ) {
      offset++;
    }
    return buffer.subarray(start, offset).toString("ascii");
  };
  const magic = token();
  if (magic !== "P5") {
    throw new Error(`not a binary PGM file (magic ${JSON.stringify(magic)})`);
  }
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width > 0 && height > 0)) {
    throw new Error(`bad PGM dimensions ${width}x${height}`);
  }
  if (maxval <= 0 || maxval > 255) {
    throw new Error(`unsupported PGM maxval ${maxval}`);
  }
  offset++; // single whitespace after maxval
  const need = width * height;
  if (buffer.length - offset < need) {
    throw new Error("PGM pixel data truncated");
  }
  return frameFromBytes(width, height, buffer.subarray(offset, offset + need));
}

export function writePgm(frame: Frame): Buffer {
  const header = Buffer.from(`P5\n${frame.width} ${frame.height}\n255\n`, "ascii");
  const pixels = Buffer.alloc(frame.width * frame.height);
  for (let i = 0; i < pixels.length; i++) {
    pixels[i] = Math.max(0, Math.min(255, Math.round(frame.data[i])));
  }
  return Buffer.concat([header, pixels]);
}

/** Load a directory of PGM frames (sorted by filename) as a video. */
export function loadPgmDirectory(dir: string, fps: number): VideoSource {
  const names = fs
    .readdirSync(dir)
    .filter((n) => n.toLowerCase().endsWith(".pgm"))
    .sort();
  if (names.length < 2) {
    throw new Error(`${dir}: need at least 2 .pgm frames, found ${names.length}`);
  }
  const frames = names.map((n) => parsePgm(fs.readFileSync(path.join(dir, n))));
  for (const f of frames) {
    if (f.width !== frames[0].width || f.height !== frames[0].height) {
      throw new Error(`${dir}: frame sizes differ`);
    }
  }
  return { fps, frames };
}

const Y4M_CHROMA_FACTORS: Record<string, number> = {
  "420": 1.5,
  "420jpeg": 1.5,
  "420mpeg2": 1.5,
  "420paldv": 1.5,
  "422": 2.0,
  "444": 3.0,
  mono: 1.0,
};

/** Parse an uncompressed YUV4MPEG2 stream; only the Y plane is kept. */
export function parseY4m(buffer: Buffer): VideoSource {
  const headerEnd = buffer.indexOf(0x0a);
  if (headerEnd < 0 || !buffer.subarray(0, 9).equals(Buffer.from("YUV4MPEG2"))) {
    throw new Error("not a YUV4MPEG2 stream");
  }
  const header = buffer.subarray(0, headerEnd).toString("ascii");
  let width = 0;
  let height = 0;
  let fps = 0;
  let chroma = "420jpeg";
  for (const tok of header.split(" ").slice(1)) {
    if (tok.startsWith("W")) width = parseInt(tok.slice(1), 10);
    else if (tok.startsWith("H")) height = parseInt(tok.slice(1), 10);
    else if (tok.startsWith("F")) {
      const [num, den] = tok.slice(1).split(":").map(Number);
      fps = num / den;
    } else if (tok.startsWith("C")) chroma = tok.slice(1);
  }
  if (!(width > 0 && height > 0 && fps > 0)) {
    throw new Error(`incomplete YUV4MPEG2 header: ${header}`);
  }
  const factor = Y4M_CHROMA_FACTORS[chroma];
  if (factor === undefined) {
    throw new Error(`unsupported chroma subsampling C${chroma}`);
  }
  const frameBytes = Math.round(width * height * factor);
  const frames: Frame[] = [];
  let offset = headerEnd + 1;
  while (offset < buffer.length) {
    const lineEnd = buffer.indexOf(0x0a, offset);
    if (lineEnd < 0) break;
    const marker = buffer.subarray(offset, lineEnd).toString("ascii");
    if (!marker.startsWith("FRAME")) {
      throw new Error(`expected FRAME marker, got ${JSON.stringify(marker)}`);
    }
    offset = lineEnd + 1;
    if (buffer.length - offset < frameBytes) {
      throw new Error("YUV4MPEG2 frame data truncated");
    }
    frames.push(
      frameFromBytes(width, height, buffer.subarray(offset, offset + width * height))
    );
    offset += frameBytes;
  }
  if (frames.length < 2) {
    throw new Error(`need at least 2 frames, found ${frames.length}`);
  }
  return { fps, frames };
}

/**
 * Load a video: a .y4m file, or a directory of PGM frames (``fps`` then
 * comes from the caller, default 25).
 */
export function loadVideo(source: string, fps = 25.0): VideoSource {
  const stat = fs.statSync(source);
  if (stat.isDirectory()) {
    return loadPgmDirectory(source, fps);
  }
  if (source.toLowerCase().endsWith(".y4m")) {
    return parseY4m(fs.readFileSync(source));
  }
  throw new Error(
    `${source}: unsupported video input (expected a .y4m file or a directory of .pgm frames)`
  );
}
