/** Typed client for the annotation HTTP API (the UI's only backend surface). */

import type { Annotation, AnnotationBox, DetectedRegion, ImageEntry } from "./types.js";

export class ApiValidationError extends Error {
  constructor(public readonly detail: string) {
    super(detail);
    this.name = "ApiValidationError";
  }
}

export interface AnnotationWithVersion extends Annotation {
  version: number;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AnnotationApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async listImages(): Promise<ImageEntry[]> {
    return this.getJson(`${this.base}/api/images`);
  }

  imageUrl(imageId: string): string {
    return `${this.base}/api/images/${encodeURIComponent(imageId)}/file`;
  }

  async getAnnotation(imageId: string): Promise<AnnotationWithVersion> {
    return this.getJson(`${this.base}/api/annotations/${encodeURIComponent(imageId)}`);
  }

  /** Store an annotation; resolves to the new server version. */
  async putAnnotation(
    imageId: string,
    imageWidth: number,
    imageHeight: number,
    boxes: AnnotationBox[],
  ): Promise<number> {
    const response = await this.fetchFn(
      `${this.base}/api/annotations/${encodeURIComponent(imageId)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ imageWidth, imageHeight, boxes }),
      },
    );
    if (response.status === 400 || response.status === 422) {
      const body = await response.json().catch(() => ({ detail: "invalid annotation" }));
      throw new ApiValidationError(
        typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail),
      );
    }
    if (!response.ok) {
      throw new Error(`save failed: HTTP ${response.status}`);
    }
    const body = await response.json();
    return body.version as number;
  }

  async getDetections(imageId: string): Promise<DetectedRegion[]> {
    const body = await this.getJson<{ regions: DetectedRegion[] }>(
      `${this.base}/api/detect/${encodeURIComponent(imageId)}`,
    );
    return body.regions;
  }

  private async getJson<T>(url: string): Promise<T> {
    const response = await this.fetchFn(url);
    if (!response.ok) {
      throw new Error(`request failed: HTTP ${response.status} for ${url}`);
    }
    return (await response.json()) as T;
  }
}
