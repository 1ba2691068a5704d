/** Shared types mirroring the annotation API contract. */

export interface AnnotationBox {
  x: number;
  y: number;
  w: number;
  h: number;
  transcription: string;
}

export interface Annotation {
  imageId: string;
  imageWidth: number;
  imageHeight: number;
  boxes: AnnotationBox[];
}

export interface ImageEntry {
  id: string;
  imageFile: string;
  width: number;
  height: number;
  hasAnnotation: boolean;
}

export interface DetectedRegion {
  x: number;
  y: number;
  w: number;
  h: number;
  scaleIndex: number;
}
