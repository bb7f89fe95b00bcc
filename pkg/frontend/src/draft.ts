// Working-copy helpers: the editor holds one mutable gene draft plus one
// dataset draft, and every control edits them through dotted paths
// ("mark.shape", "path.pointCount") so the service's field-path errors can
// be routed straight back to the control that caused them.

import type { Dataset, Gene } from "./types";

export function defaultGene(): Gene {
  return {
    name: "fresh-start",
    path: { mode: "inline_linear", pointCount: 6 },
    envelope: { mode: "parallel", topExtent: 0.45, bottomExtent: 0.45, sidePolicy: "center", switchOnTurn: false },
    mark: { shape: "rect", anchor: "centered", gapFraction: 0.05 },
    mappings: [
      { channel: "mark_height", source: "value_over_range" },
      { channel: "colour", source: "index", palette: ["#0072B2", "#E69F00", "#009E73", "#D55E00", "#56B4E9"] },
    ],
    filters: [],
  };
}

export function demoDataset(): Dataset {
  return {
    categories: [
      { name: "alpha", value: 30, range: 100 },
      { name: "beta", value: 55, range: 100 },
      { name: "gamma", value: 80, range: 100 },
      { name: "delta", value: 45, range: 100 },
      { name: "epsilon", value: 62, range: 100 },
    ],
    width: 4.4,
    height: 4.4,
    padding: 0.2,
  };
}

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

/** Read a dotted path ("mark.shape", "mappings.1.source") out of a draft. */
export function getAtPath(obj: unknown, path: string): unknown {
  let cur: unknown = obj;
  for (const key of path.split(".")) {
    if (cur === null || cur === undefined) return undefined;
    const idx = /^\d+$/.test(key) ? Number(key) : key;
    cur = (cur as Record<string | number, unknown>)[idx];
  }
  return cur;
}

/**
 * Return a copy of the draft with one dotted path replaced. Missing
 * intermediate objects are created; a value of `undefined` deletes the key
 * so the serialised gene stays minimal.
 */
export function setAtPath(gene: Gene, path: string, value: unknown): Gene {
  const next = clone(gene) as unknown as Record<string, unknown>;
  const keys = path.split(".");
  let cur: Record<string | number, unknown> = next;
  for (let i = 0; i < keys.length - 1; i++) {
    const raw = keys[i]!;
    const key = /^\d+$/.test(raw) ? Number(raw) : raw;
    let child = cur[key];
    if (child === null || typeof child !== "object") {
      child = /^\d+$/.test(keys[i + 1]!) ? [] : {};
      cur[key] = child;
    }
    cur = child as Record<string | number, unknown>;
  }
  const last = keys[keys.length - 1]!;
  const lastKey = /^\d+$/.test(last) ? Number(last) : last;
  if (value === undefined) {
    delete cur[lastKey];
  } else {
    cur[lastKey] = value;
  }
  return next as unknown as Gene;
}

/** Error paths from the service use [i] for lists; controls use dots. */
export function normaliseErrorPath(path: string): string {
  return path.replace(/\[(\d+)\]/g, ".$1");
}
