/** Canvas <-> image coordinate transforms and box construction.
 *
 * The view maps image pixel (ix, iy) to canvas point
 * (ix * zoom + panX, iy * zoom + panY). Boxes are built in image space
 * with corners rounded to the nearest integer pixel, so a drag at zoom 2
 * stores exactly half its canvas-space extent.
 */

export interface Point {
  x: number;
  y: number;
}

export interface ViewTransform {
  zoom: number;
  panX: number;
  panY: number;
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export function canvasToImage(p: Point, t: ViewTransform): Point {
  return { x: (p.x - t.panX) / t.zoom, y: (p.y - t.panY) / t.zoom };
}

export function imageToCanvas(p: Point, t: ViewTransform): Point {
  return { x: p.x * t.zoom + t.panX, y: p.y * t.zoom + t.panY };
}

/** Build an integer image-space box from a canvas drag; null when degenerate. */
export function dragToBox(start: Point, end: Point, t: ViewTransform): Rect | null {
  const a = canvasToImage(start, t);
  const b = canvasToImage(end, t);
  const x0 = Math.round(Math.min(a.x, b.x));
  const y0 = Math.round(Math.min(a.y, b.y));
  const x1 = Math.round(Math.max(a.x, b.x));
  const y1 = Math.round(Math.max(a.y, b.y));
  if (x1 - x0 < 1 || y1 - y0 < 1) {
    return null;
  }
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

/** Clip a box to the image; null when nothing remains. */
export function clipToImage(rect: Rect, imageW: number, imageH: number): Rect | null {
  const x0 = Math.max(0, rect.x);
  const y0 = Math.max(0, rect.y);
  const x1 = Math.min(imageW, rect.x + rect.w);
  const y1 = Math.min(imageH, rect.y + rect.h);
  if (x1 - x0 < 1 || y1 - y0 < 1) {
    return null;
  }
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

export function rectContains(rect: Rect, p: Point): boolean {
  return p.x >= rect.x && p.x < rect.x + rect.w && p.y >= rect.y && p.y < rect.y + rect.h;
}

/** Zoom about a canvas anchor point so the pixel under the cursor stays put. */
export function zoomAround(t: ViewTransform, anchor: Point, factor: number): ViewTransform {
  const zoom = Math.min(16, Math.max(0.05, t.zoom * factor));
  const applied = zoom / t.zoom;
  return {
    zoom,
    panX: anchor.x - (anchor.x - t.panX) * applied,
    panY: anchor.y - (anchor.y - t.panY) * applied,
  };
}

/** Transform that letterboxes the whole image into the viewport. */
export function fitToView(
  imageW: number,
  imageH: number,
  viewW: number,
  viewH: number,
): ViewTransform {
  const zoom = Math.min(viewW / imageW, viewH / imageH);
  return {
    zoom,
    panX: (viewW - imageW * zoom) / 2,
    panY: (viewH - imageH * zoom) / 2,
  };
}
