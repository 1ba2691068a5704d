import { describe, expect, it } from "vitest";

import {
  canvasToImage,
  clipToImage,
  dragToBox,
  fitToView,
  imageToCanvas,
  zoomAround,
} from "../src/geometry.js";

describe("dragToBox", () => {
  it("maps a drag at zoom 1 to those pixel bounds", () => {
    const rect = dragToBox({ x: 10, y: 20 }, { x: 110, y: 60 }, { zoom: 1, panX: 0, panY: 0 });
    expect(rect).toEqual({ x: 10, y: 20, w: 100, h: 40 });
  });

  it("stores image coordinates at exactly half the canvas extent at zoom 2", () => {
    // acceptance: zoom-coordinate correctness
    const rect = dragToBox(
      { x: 100, y: 40 },
      { x: 300, y: 140 },
      { zoom: 2, panX: 0, panY: 0 },
    );
    expect(rect).toEqual({ x: 50, y: 20, w: 100, h: 50 });
  });

  it("rounds corners to the nearest integer pixel", () => {
    const rect = dragToBox(
      { x: 101, y: 41 },
      { x: 300, y: 140 },
      { zoom: 2, panX: 0, panY: 0 },
    );
    // corners 50.5 and 20.5 round up to 51 and 21; far corners stay 150 and 70
    expect(rect).toEqual({ x: 51, y: 21, w: 99, h: 49 });
  });

  it("accounts for pan offset", () => {
    const rect = dragToBox(
      { x: 60, y: 70 },
      { x: 160, y: 120 },
      { zoom: 1, panX: 50, panY: 50 },
    );
    expect(rect).toEqual({ x: 10, y: 20, w: 100, h: 50 });
  });

  it("discards a click without drag", () => {
    expect(dragToBox({ x: 5, y: 5 }, { x: 5, y: 5 }, { zoom: 1, panX: 0, panY: 0 })).toBeNull();
  });

  it("discards sub-pixel drags at high zoom", () => {
    expect(
      dragToBox({ x: 100, y: 100 }, { x: 103, y: 103 }, { zoom: 8, panX: 0, panY: 0 }),
    ).toBeNull();
  });

  it("normalizes reversed drags", () => {
    const rect = dragToBox({ x: 110, y: 60 }, { x: 10, y: 20 }, { zoom: 1, panX: 0, panY: 0 });
    expect(rect).toEqual({ x: 10, y: 20, w: 100, h: 40 });
  });
});

describe("transform round trips", () => {
  it("canvas -> image -> canvas is the identity", () => {
    const t = { zoom: 2.5, panX: 37, panY: -12 };
    const p = { x: 123, y: 456 };
    const back = imageToCanvas(canvasToImage(p, t), t);
    expect(back.x).toBeCloseTo(p.x, 10);
    expect(back.y).toBeCloseTo(p.y, 10);
  });

  it("zoomAround keeps the anchor pixel fixed", () => {
    const t = { zoom: 1, panX: 0, panY: 0 };
    const anchor = { x: 200, y: 150 };
    const before = canvasToImage(anchor, t);
    const after = canvasToImage(anchor, zoomAround(t, anchor, 2));
    expect(after.x).toBeCloseTo(before.x, 10);
    expect(after.y).toBeCloseTo(before.y, 10);
  });
});

describe("clipToImage", () => {
  it("clips boxes that spill over the edges", () => {
    expect(clipToImage({ x: -10, y: 5, w: 30, h: 100 }, 100, 50)).toEqual({
      x: 0,
      y: 5,
      w: 20,
      h: 45,
    });
  });

  it("rejects boxes fully outside", () => {
    expect(clipToImage({ x: 200, y: 5, w: 30, h: 10 }, 100, 50)).toBeNull();
  });
});

describe("fitToView", () => {
  it("letterboxes and centers the image", () => {
    const t = fitToView(100, 50, 400, 400);
    expect(t.zoom).toBe(4);
    expect(t.panX).toBe(0);
    expect(t.panY).toBe(100);
  });
});
