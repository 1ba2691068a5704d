/** Canvas rendering and pointer interaction for the annotation editor. */

import {
  canvasToImage,
  dragToBox,
  fitToView,
  imageToCanvas,
  rectContains,
  zoomAround,
  type Point,
  type Rect,
  type ViewTransform,
} from "./geometry.js";
import type { AnnotationSession } from "./session.js";

const COLORS = {
  background: "#16181d",
  box: "#3ddc84",
  boxSelected: "#ffd54a",
  boxUnlabeled: "#ff8a65",
  overlay: "#64b5f6",
  rubberBand: "#ffffff",
};

export class AnnotatorCanvas {
  private readonly ctx: CanvasRenderingContext2D;
  private image: HTMLImageElement | null = null;
  private view: ViewTransform = { zoom: 1, panX: 0, panY: 0 };
  private dragStart: Point | null = null;
  private dragCurrent: Point | null = null;
  private panning = false;
  private lastPointer: Point = { x: 0, y: 0 };

  onBoxDrawn: ((rect: Rect) => void) | null = null;
  onBoxSelected: ((index: number | null) => void) | null = null;
  onOverlayAccepted: ((index: number) => void) | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly session: AnnotationSession,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("2d canvas context unavailable");
    }
    this.ctx = ctx;
    canvas.addEventListener("pointerdown", (e) => this.handlePointerDown(e));
    canvas.addEventListener("pointermove", (e) => this.handlePointerMove(e));
    canvas.addEventListener("pointerup", (e) => this.handlePointerUp(e));
    canvas.addEventListener("dblclick", (e) => this.handleDoubleClick(e));
    canvas.addEventListener("wheel", (e) => this.handleWheel(e), { passive: false });
  }

  setImage(image: HTMLImageElement): void {
    this.image = image;
    this.fit();
  }

  fit(): void {
    if (this.image) {
      this.view = fitToView(
        this.image.naturalWidth,
        this.image.naturalHeight,
        this.canvas.width,
        this.canvas.height,
      );
    }
    this.render();
  }

  zoomBy(factor: number): void {
    this.view = zoomAround(
      this.view,
      { x: this.canvas.width / 2, y: this.canvas.height / 2 },
      factor,
    );
    this.render();
  }

  private pointerPos(e: MouseEvent): Point {
    const bounds = this.canvas.getBoundingClientRect();
    return { x: e.clientX - bounds.left, y: e.clientY - bounds.top };
  }

  private handlePointerDown(e: PointerEvent): void {
    const p = this.pointerPos(e);
    this.lastPointer = p;
    this.canvas.setPointerCapture(e.pointerId);
    if (e.button === 1 || e.ctrlKey || e.button === 2) {
      this.panning = true;
      return;
    }
    const hit = this.hitBox(p);
    if (hit !== null) {
      this.onBoxSelected?.(hit);
      this.render();
      return;
    }
    this.dragStart = p;
    this.dragCurrent = p;
  }

  private handlePointerMove(e: PointerEvent): void {
    const p = this.pointerPos(e);
    if (this.panning) {
      this.view = {
        ...this.view,
        panX: this.view.panX + p.x - this.lastPointer.x,
        panY: this.view.panY + p.y - this.lastPointer.y,
      };
      this.lastPointer = p;
      this.render();
      return;
    }
    this.lastPointer = p;
    if (this.dragStart) {
      this.dragCurrent = p;
      this.render();
    }
  }

  private handlePointerUp(e: PointerEvent): void {
    this.canvas.releasePointerCapture(e.pointerId);
    if (this.panning) {
      this.panning = false;
      return;
    }
    if (this.dragStart && this.dragCurrent) {
      const rect = dragToBox(this.dragStart, this.dragCurrent, this.view);
      this.dragStart = null;
      this.dragCurrent = null;
      if (rect) {
        this.onBoxDrawn?.(rect);
      } else {
        this.onBoxSelected?.(null);  // plain click clears the selection
      }
    }
    this.render();
  }

  private handleDoubleClick(e: MouseEvent): void {
    const p = canvasToImage(this.pointerPos(e), this.view);
    const index = this.session.overlay.findIndex((r) => rectContains(r, p));
    if (index >= 0) {
      this.onOverlayAccepted?.(index);
    }
  }

  private handleWheel(e: WheelEvent): void {
    e.preventDefault();
    const factor = e.deltaY < 0 ? 1.15 : 1 / 1.15;
    this.view = zoomAround(this.view, this.pointerPos(e), factor);
    this.render();
  }

  private hitBox(canvasPoint: Point): number | null {
    const p = canvasToImage(canvasPoint, this.view);
    const boxes = this.session.boxes();
    for (let i = boxes.length - 1; i >= 0; i--) {
      if (rectContains(boxes[i], p)) {
        return i;
      }
    }
    return null;
  }

  render(): void {
    const { ctx, canvas } = this;
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    if (!this.image) {
      return;
    }
    ctx.save();
    ctx.translate(this.view.panX, this.view.panY);
    ctx.scale(this.view.zoom, this.view.zoom);
    ctx.imageSmoothingEnabled = this.view.zoom < 2;
    ctx.drawImage(this.image, 0, 0);
    ctx.restore();

    // detector suggestions: dashed and visually distinct, never part of the annotation
    ctx.setLineDash([6, 4]);
    ctx.strokeStyle = COLORS.overlay;
    ctx.lineWidth = 1.5;
    for (const region of this.session.overlay) {
      this.strokeImageRect(region);
    }
    ctx.setLineDash([]);

    const boxes = this.session.boxes();
    boxes.forEach((box, i) => {
      ctx.strokeStyle =
        i === this.session.selectedBox
          ? COLORS.boxSelected
          : box.transcription
            ? COLORS.box
            : COLORS.boxUnlabeled;
      ctx.lineWidth = i === this.session.selectedBox ? 2.5 : 1.5;
      this.strokeImageRect(box);
      if (box.transcription) {
        const corner = imageToCanvas({ x: box.x, y: box.y }, this.view);
        ctx.font = "12px system-ui, sans-serif";
        ctx.fillStyle = ctx.strokeStyle;
        ctx.fillText(box.transcription, corner.x, corner.y - 4);
      }
    });

    if (this.dragStart && this.dragCurrent) {
      ctx.strokeStyle = COLORS.rubberBand;
      ctx.lineWidth = 1;
      ctx.setLineDash([4, 3]);
      ctx.strokeRect(
        Math.min(this.dragStart.x, this.dragCurrent.x),
        Math.min(this.dragStart.y, this.dragCurrent.y),
        Math.abs(this.dragCurrent.x - this.dragStart.x),
        Math.abs(this.dragCurrent.y - this.dragStart.y),
      );
      ctx.setLineDash([]);
    }
  }

  private strokeImageRect(rect: Rect): void {
    const a = imageToCanvas({ x: rect.x, y: rect.y }, this.view);
    const b = imageToCanvas({ x: rect.x + rect.w, y: rect.y + rect.h }, this.view);
    this.ctx.strokeRect(a.x, a.y, b.x - a.x, b.y - a.y);
  }
}
