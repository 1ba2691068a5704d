import { beforeEach, describe, expect, it } from "vitest";

import { AnnotationApi } from "../src/api.js";
import { AnnotationSession } from "../src/session.js";
import type { Annotation, AnnotationBox } from "../src/types.js";

/** In-memory stand-in for the annotation service, canonicalizing like the backend. */
class FakeServer {
  files = new Map<string, string>();
  versions = new Map<string, number>();
  putCount = 0;

  constructor(
    readonly images = [
      { id: "img_007", imageFile: "img_007.png", width: 640, height: 400, hasAnnotation: false },
      { id: "img_008", imageFile: "img_008.png", width: 320, height: 240, hasAnnotation: false },
    ],
  ) {}

  /** Mirrors the backend's canonical serialization byte for byte. */
  canonicalize(annotation: Annotation): string {
    const boxes = [...annotation.boxes].sort(
      (a, b) =>
        a.y - b.y || a.x - b.x || a.w - b.w || a.h - b.h ||
        (a.transcription < b.transcription ? -1 : a.transcription > b.transcription ? 1 : 0),
    );
    const doc = {
      imageId: annotation.imageId,
      imageWidth: annotation.imageWidth,
      imageHeight: annotation.imageHeight,
      boxes: boxes.map((b) => ({
        x: b.x, y: b.y, w: b.w, h: b.h, transcription: b.transcription,
      })),
    };
    return JSON.stringify(doc, null, 2) + "\n";
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const respond = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });
    if (url.endsWith("/api/images")) {
      return respond(this.images);
    }
    const annotationMatch = url.match(/\/api\/annotations\/([^/]+)$/);
    if (annotationMatch) {
      const id = decodeURIComponent(annotationMatch[1]);
      const image = this.images.find((e) => e.id === id);
      if (!image) {
        return respond({ detail: "unknown image" }, 404);
      }
      if (init?.method === "PUT") {
        this.putCount += 1;
        const payload = JSON.parse(init.body as string) as Annotation;
        const boxes = payload.boxes as AnnotationBox[];
        for (const [i, box] of boxes.entries()) {
          if (box.x < 0 || box.y < 0 || box.x + box.w > payload.imageWidth ||
              box.y + box.h > payload.imageHeight || box.w < 1 || box.h < 1) {
            return respond({ detail: `${id}: box ${i} exceeds image bounds` }, 400);
          }
        }
        this.files.set(id, this.canonicalize({ ...payload, imageId: id }));
        const version = (this.versions.get(id) ?? 0) + 1;
        this.versions.set(id, version);
        return respond({ version });
      }
      const stored = this.files.get(id);
      const annotation: Annotation = stored
        ? (JSON.parse(stored) as Annotation)
        : { imageId: id, imageWidth: image.width, imageHeight: image.height, boxes: [] };
      return respond({ ...annotation, version: this.versions.get(id) ?? 0 });
    }
    if (url.includes("/api/detect/")) {
      return respond({ imageId: "x", regions: [{ x: 40, y: 30, w: 120, h: 25, scaleIndex: 1 }] });
    }
    return respond({ detail: "not found" }, 404);
  };
}

// canonical bytes produced by the backend CLI for the same annotation
const BACKEND_GOLDEN =
  '{\n  "imageId": "img_007",\n  "imageWidth": 640,\n  "imageHeight": 400,\n  "boxes": [\n' +
  '    {\n      "x": 48,\n      "y": 112,\n      "w": 230,\n      "h": 41,\n' +
  '      "transcription": "ÇIKIŞ"\n    }\n  ]\n}\n';

describe("AnnotationSession", () => {
  let server: FakeServer;
  let session: AnnotationSession;

  beforeEach(async () => {
    server = new FakeServer();
    session = new AnnotationSession(new AnnotationApi("", server.fetch));
    await session.refreshImageList();
    await session.open(0);
  });

  it("starts clean", () => {
    expect(session.dirty).toBe(false);
    expect(session.boxes()).toEqual([]);
    expect(session.serverVersion).toBe(0);
  });

  it("adding a box marks the session dirty and selects it", () => {
    const index = session.addBox({ x: 48, y: 112, w: 230, h: 41 });
    expect(index).toBe(0);
    expect(session.dirty).toBe(true);
    expect(session.selectedBox).toBe(0);
  });

  it("stores labels exactly as typed, including Turkish code points", () => {
    const index = session.addBox({ x: 10, y: 10, w: 50, h: 20 })!;
    session.setLabel(index, "ÇIKIŞ ĞÜŞİÖÇ ğüşiöç");
    expect(session.boxes()[index].transcription).toBe("ÇIKIŞ ĞÜŞİÖÇ ğüşiöç");
  });

  it("degenerate and fully-outside boxes are rejected", () => {
    expect(session.addBox({ x: 700, y: 10, w: 20, h: 20 })).toBeNull();
    expect(session.dirty).toBe(false);
  });

  it("save is gated on dirty: no request when nothing changed", async () => {
    const result = await session.save();
    expect(result).toEqual({ kind: "not-dirty" });
    expect(server.putCount).toBe(0);
  });

  it("save clears dirty and records the server version", async () => {
    session.addBox({ x: 48, y: 112, w: 230, h: 41 }, "ÇIKIŞ");
    const result = await session.save();
    expect(result).toEqual({ kind: "saved", version: 1 });
    expect(session.dirty).toBe(false);
    expect(session.serverVersion).toBe(1);
    const again = await session.save();
    expect(again.kind).toBe("not-dirty");
    expect(server.putCount).toBe(1);
  });

  it("round trip preserves every box and every UTF-8 code point", async () => {
    // acceptance: draw one box, label it, save, reload
    const index = session.addBox({ x: 48, y: 112, w: 230, h: 41 })!;
    session.setLabel(index, "ÇIKIŞ");
    await session.save();
    await session.open(0); // reload from the server
    expect(session.boxes()).toEqual([
      { x: 48, y: 112, w: 230, h: 41, transcription: "ÇIKIŞ" },
    ]);
    expect([...session.boxes()[0].transcription]).toEqual(["Ç", "I", "K", "I", "Ş"]);
    expect(session.dirty).toBe(false);
  });

  it("stored file is byte-identical to the backend's canonical serialization", async () => {
    const index = session.addBox({ x: 48, y: 112, w: 230, h: 41 })!;
    session.setLabel(index, "ÇIKIŞ");
    await session.save();
    expect(server.files.get("img_007")).toBe(BACKEND_GOLDEN);
  });

  it("validation failure is surfaced inline and keeps local edits", async () => {
    session.addBox({ x: 48, y: 112, w: 230, h: 41 }, "ÇIKIŞ");
    // invalidate behind the session's back (as an image swap would)
    session.working!.imageWidth = 100;
    const result = await session.save();
    expect(result.kind).toBe("invalid");
    if (result.kind === "invalid") {
      expect(result.detail).toContain("box 0");
    }
    expect(session.dirty).toBe(true);
    expect(session.boxes()).toHaveLength(1);
  });

  it("navigation guard reports unsaved edits", () => {
    expect(session.hasUnsavedEdits()).toBe(false);
    session.addBox({ x: 10, y: 10, w: 50, h: 20 });
    expect(session.hasUnsavedEdits()).toBe(true);
  });

  it("opening another image resets state", async () => {
    session.addBox({ x: 10, y: 10, w: 50, h: 20 });
    await session.open(1);
    expect(session.dirty).toBe(false);
    expect(session.boxes()).toEqual([]);
    expect(session.current?.id).toBe("img_008");
  });

  it("overlay boxes are separate until explicitly accepted", async () => {
    await session.loadOverlay();
    expect(session.overlay).toHaveLength(1);
    expect(session.boxes()).toHaveLength(0); // suggestions are never saved implicitly
    const index = session.acceptOverlayBox(0);
    expect(index).toBe(0);
    expect(session.boxes()[0]).toEqual({ x: 40, y: 30, w: 120, h: 25, transcription: "" });
    expect(session.dirty).toBe(true);
  });

  it("removing and relabeling boxes updates dirty state", async () => {
    const index = session.addBox({ x: 10, y: 10, w: 50, h: 20 }, "BİR")!;
    await session.save();
    session.setLabel(index, "BİR"); // unchanged label does not re-dirty
    expect(session.dirty).toBe(false);
    session.removeBox(index);
    expect(session.dirty).toBe(true);
    expect(session.boxes()).toHaveLength(0);
  });
});
