import { describe, expect, it } from "vitest";

import { parsePgm, parseY4m, writePgm } from "../src/frame.js";
import { makeFaceVideo } from "./helpers.js";

describe("PGM", () => {
  it("round-trips a frame", () => {
    const frame = makeFaceVideo().frames[0];
    const back = parsePgm(writePgm(frame));
    expect(back.width).toBe(frame.width);
    expect(back.height).toBe(frame.height);
    for (let i = 0; i < frame.data.length; i++) {
      expect(back.data[i]).toBe(Math.round(frame.data[i]));
    }
  });

  it("rejects non-PGM data", () => {
    expect(() => parsePgm(Buffer.from("JFIF....."))).toThrow(/PGM/);
  });

  it("rejects truncated pixel data", () => {
    expect(() => parsePgm(Buffer.from("P5\n4 4\n255\n\x00\x01"))).toThrow(
      /truncated/
    );
  });
});

describe("Y4M", () => {
  function y4mBytes(width: number, height: number, nFrames: number): Buffer {
    const chunks = [Buffer.from(`YUV4MPEG2 W${width} H${height} F25:1 Ip A1:1 C420jpeg\n`)];
    for (let f = 0; f < nFrames; f++) {
      chunks.push(Buffer.from("FRAME\n"));
      const y = Buffer.alloc(width * height, f + 10);
      const uv = Buffer.alloc((width * height) / 2, 128);
      chunks.push(y, uv);
    }
    return Buffer.concat(chunks);
  }

  it("parses header, fps and luma planes", () => {
    const video = parseY4m(y4mBytes(16, 8, 3));
    expect(video.fps).toBe(25);
    expect(video.frames.length).toBe(3);
    expect(video.frames[0].width).toBe(16);
    expect(video.frames[1].data[0]).toBe(11);
  });

  it("rejects a foreign stream", () => {
    expect(() => parseY4m(Buffer.from("RIFF....WEBP"))).toThrow(/YUV4MPEG2/);
  });

  it("rejects unsupported chroma", () => {
    const buf = Buffer.from("YUV4MPEG2 W4 H4 F25:1 C411\nFRAME\n" + "\x00".repeat(24));
    expect(() => parseY4m(buf)).toThrow(/chroma/);
  });
});
