// JSON shapes exchanged with the render service. Field names mirror the
// canonical gene serialisation exactly (camelCase, nulls kept).

export interface PathSpec {
  mode: string;
  pointCount?: number | null;
  pointDistance?: number | null;
  rotation?: number | null;
  jumps?: number[];
  order?: number | null;
  points?: [number, number][] | null;
}

export interface EnvelopeSpec {
  mode: string;
  topExtent: number;
  bottomExtent: number;
  sidePolicy: string | string[];
  switchOnTurn: boolean;
  fixedPoint?: [number, number] | null;
}

export interface MarkSpec {
  shape: string;
  anchor: string;
  gapFraction: number;
  jitter?: number;
  radius?: number | null;
  ringWidth?: number | null;
  stacking?: boolean;
  starAnchor?: [number, number] | null;
  sizeChannel?: string | null;
  positionChannel?: string | null;
}

export interface GradientStop {
  offset: number;
  colour: string;
}

export interface Mapping {
  channel: string;
  source: string;
  constant?: unknown;
  palette?: string[] | null;
  gradient?: GradientStop[] | null;
}

// Filters serialise flat: {kind, ...params}.
export interface FilterSpec {
  kind: string;
  [param: string]: unknown;
}

export interface Gene {
  name?: string;
  geneVersion?: number;
  grouping?: number;
  path: PathSpec;
  envelope?: EnvelopeSpec;
  mark?: MarkSpec;
  mappings?: Mapping[];
  filters?: FilterSpec[];
}

export interface Category {
  name: string;
  value: number;
  range: number;
}

export interface Dataset {
  categories: Category[];
  width?: number;
  height?: number;
  padding?: number;
  series?: [number, number][];
}

export interface FieldError {
  path: string;
  message: string;
}

export interface PathModeInfo {
  mode: string;
  description: string;
  params: string[];
}

export interface StoredGene {
  id: string;
  gene: Gene;
  liked: boolean;
  createdAt: string;
}

export interface RenderResult {
  bytes: Uint8Array;
  text: string;
  hash: string; // value of the X-Genii-Hash response header
}
