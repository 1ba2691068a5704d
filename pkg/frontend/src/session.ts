/** Annotation session state: the working copy, dirty tracking and saving.
 *
 * All mutations go through this class so the dirty flag is always
 * accurate: a save is only issued when something actually changed, and
 * navigation away from unsaved edits can be intercepted.
 */

import { AnnotationApi, ApiValidationError } from "./api.js";
import { clipToImage, type Rect } from "./geometry.js";
import type { Annotation, AnnotationBox, DetectedRegion, ImageEntry } from "./types.js";

export type SaveResult =
  | { kind: "saved"; version: number }
  | { kind: "not-dirty" }
  | { kind: "invalid"; detail: string };

export class AnnotationSession {
  imageList: ImageEntry[] = [];
  currentIndex = -1;
  working: Annotation | null = null;
  dirty = false;
  serverVersion = 0;
  selectedBox: number | null = null;
  overlay: DetectedRegion[] = [];

  constructor(private readonly api: AnnotationApi) {}

  get current(): ImageEntry | null {
    return this.currentIndex >= 0 ? this.imageList[this.currentIndex] : null;
  }

  async refreshImageList(): Promise<void> {
    this.imageList = await this.api.listImages();
  }

  /** Load an image's annotation, discarding any local state. */
  async open(index: number): Promise<void> {
    if (index < 0 || index >= this.imageList.length) {
      throw new Error(`image index ${index} out of range`);
    }
    const entry = this.imageList[index];
    const annotation = await this.api.getAnnotation(entry.id);
    this.currentIndex = index;
    this.working = {
      imageId: annotation.imageId,
      imageWidth: annotation.imageWidth,
      imageHeight: annotation.imageHeight,
      boxes: annotation.boxes.map((b) => ({ ...b })),
    };
    this.serverVersion = annotation.version;
    this.dirty = false;
    this.selectedBox = null;
    this.overlay = [];
  }

  /** Add a drawn box (already in image coordinates); returns its index. */
  addBox(rect: Rect, transcription = ""): number | null {
    if (!this.working) {
      return null;
    }
    const clipped = clipToImage(rect, this.working.imageWidth, this.working.imageHeight);
    if (!clipped) {
      return null;
    }
    this.working.boxes.push({ ...clipped, transcription });
    this.dirty = true;
    this.selectedBox = this.working.boxes.length - 1;
    return this.selectedBox;
  }

  /** Store the label exactly as typed (UTF-8 code points untouched). */
  setLabel(index: number, transcription: string): void {
    const box = this.box(index);
    if (box.transcription !== transcription) {
      box.transcription = transcription;
      this.dirty = true;
    }
  }

  moveBox(index: number, rect: Rect): void {
    if (!this.working) {
      return;
    }
    const clipped = clipToImage(rect, this.working.imageWidth, this.working.imageHeight);
    if (!clipped) {
      return;
    }
    Object.assign(this.box(index), clipped);
    this.dirty = true;
  }

  removeBox(index: number): void {
    if (!this.working) {
      return;
    }
    this.working.boxes.splice(index, 1);
    this.dirty = true;
    this.selectedBox = null;
  }

  /** Copy a detector suggestion into the working boxes as a normal box. */
  acceptOverlayBox(index: number): number | null {
    const region = this.overlay[index];
    if (!region) {
      return null;
    }
    return this.addBox({ x: region.x, y: region.y, w: region.w, h: region.h });
  }

  async loadOverlay(): Promise<void> {
    const entry = this.current;
    this.overlay = entry ? await this.api.getDetections(entry.id) : [];
  }

  /** True when leaving the image needs user confirmation. */
  hasUnsavedEdits(): boolean {
    return this.dirty;
  }

  /** PUT the working annotation; no request when nothing changed. */
  async save(): Promise<SaveResult> {
    if (!this.working || !this.dirty) {
      return { kind: "not-dirty" };
    }
    try {
      const version = await this.api.putAnnotation(
        this.working.imageId,
        this.working.imageWidth,
        this.working.imageHeight,
        this.working.boxes,
      );
      this.serverVersion = version;
      this.dirty = false;
      const entry = this.current;
      if (entry) {
        entry.hasAnnotation = true;
      }
      return { kind: "saved", version };
    } catch (error) {
      if (error instanceof ApiValidationError) {
        // surface inline; local edits stay untouched
        return { kind: "invalid", detail: error.detail };
      }
      throw error;
    }
  }

  boxes(): readonly AnnotationBox[] {
    return this.working ? this.working.boxes : [];
  }

  private box(index: number): AnnotationBox {
    if (!this.working || index < 0 || index >= this.working.boxes.length) {
      throw new Error(`box index ${index} out of range`);
    }
    return this.working.boxes[index];
  }
}
