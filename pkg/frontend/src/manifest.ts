// Static schema manifest: what each gene property means, what values it
// takes, and which panel section owns it. The path-mode list itself is NOT
// in here — it comes from GET /paths at boot, so new engine modes show up
// in the palette without touching the UI.

export type ControlKind = "enum" | "number" | "text" | "toggle";

export interface PropertyDef {
  path: string; // dotted path into the gene draft
  label: string;
  kind: ControlKind;
  section: "path" | "envelope" | "mark" | "style";
  hint: string; // one-line plain-words description shown under the control
  options?: readonly string[]; // enum choices (also the drag chips)
  min?: number;
  max?: number;
  step?: number;
  optional?: boolean; // empty input deletes the key instead of writing 0/""
}

export const MARK_SHAPES = [
  "rect",
  "circle",
  "ellipse",
  "triangle",
  "arc",
  "line",
  "donut_segment",
  "text",
] as const;

export const ANCHORS = ["centered", "on_path_above", "on_path_below"] as const;

export const SIDE_POLICIES = [
  "center",
  "top_only",
  "bottom_only",
  "alternate",
] as const;

export const ENVELOPE_MODES = ["parallel", "fixed_point"] as const;

export const CHANNELS = [
  "mark_height",
  "mark_width",
  "mark_position",
  "vertex_position",
  "colour",
  "angle",
  "text",
  "filter_param",
] as const;

export const SOURCES = [
  "value",
  "value_over_range",
  "name",
  "index",
  "constant",
] as const;

export const FILTER_KINDS = [
  "overlap",
  "cutout",
  "union",
  "intersect",
  "subtract",
  "solid_fill",
  "linear_gradient",
  "radial_gradient",
  "stroke",
  "opacity",
  "round_corners",
  "smooth",
  "metaball",
  "blur",
  "shadow",
] as const;

export const PROPERTIES: PropertyDef[] = [
  {
    path: "name",
    label: "name",
    kind: "text",
    section: "style",
    hint: "also the random seed — change a letter to get a deterministic sibling",
  },
  {
    path: "path.pointCount",
    label: "points",
    kind: "number",
    section: "path",
    hint: "how many vertices the skeleton has; marks sit on the edges between them",
    min: 2,
    max: 256,
    step: 1,
    optional: true,
  },
  {
    path: "path.rotation",
    label: "rotation",
    kind: "number",
    section: "path",
    hint: "spins the whole skeleton counter-clockwise, in degrees",
    min: -360,
    max: 360,
    step: 15,
    optional: true,
  },
  {
    path: "path.order",
    label: "order",
    kind: "number",
    section: "path",
    hint: "depth of the space-filling curve (side 2^k, or 3^k for peano)",
    min: 1,
    max: 5,
    step: 1,
    optional: true,
  },
  {
    path: "envelope.topExtent",
    label: "reach above",
    kind: "number",
    section: "envelope",
    hint: "how far marks may grow above the skeleton (fraction of the canvas)",
    min: 0,
    max: 0.5,
    step: 0.05,
  },
  {
    path: "envelope.bottomExtent",
    label: "reach below",
    kind: "number",
    section: "envelope",
    hint: "how far marks may grow below the skeleton",
    min: 0,
    max: 0.5,
    step: 0.05,
  },
  {
    path: "envelope.sidePolicy",
    label: "growth side",
    kind: "enum",
    section: "envelope",
    hint: "which side of the skeleton the marks occupy",
    options: SIDE_POLICIES,
  },
  {
    path: "envelope.switchOnTurn",
    label: "flip on turns",
    kind: "toggle",
    section: "envelope",
    hint: "swap sides whenever the path doubles back, keeping objects upright",
  },
  {
    path: "mark.shape",
    label: "shape",
    kind: "enum",
    section: "mark",
    hint: "the glyph stamped on every edge of the skeleton",
    options: MARK_SHAPES,
  },
  {
    path: "mark.anchor",
    label: "anchor",
    kind: "enum",
    section: "mark",
    hint: "whether marks straddle the path or sit on one side of it",
    options: ANCHORS,
  },
  {
    path: "mark.gapFraction",
    label: "gap",
    kind: "number",
    section: "mark",
    hint: "breathing room between neighbouring marks, as a share of edge length",
    min: 0,
    max: 0.9,
    step: 0.05,
  },
  {
    path: "mark.jitter",
    label: "jitter",
    kind: "number",
    section: "mark",
    hint: "seeded random nudge along the edge; same name, same nudges",
    min: 0,
    max: 0.2,
    step: 0.01,
    optional: true,
  },
  {
    path: "grouping",
    label: "grouping",
    kind: "number",
    section: "style",
    hint: "marks per colour/filter group (1 = every mark on its own)",
    min: 1,
    max: 16,
    step: 1,
    optional: true,
  },
];

export function propertyFor(path: string): PropertyDef | undefined {
  return PROPERTIES.find((p) => p.path === path);
}
