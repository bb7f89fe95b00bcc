// The genes panel: every property of the working gene as a control, plus a
// chip palette. Chips are draggable; dropping one on a slot commits the
// value through the same code path as typing it. Validation errors from the
// service anchor to the control owning the offending field path.

import type { FieldError, Gene, PathModeInfo } from "./types";
import { getAtPath, normaliseErrorPath } from "./draft";
import { PROPERTIES, type PropertyDef } from "./manifest";

export const CHIP_MIME = "application/x-genii-chip";

export interface PanelHost {
  getGene(): Gene;
  /** Write one dotted path into the draft and kick off validate+render. */
  commit(path: string, value: unknown): void;
  openPathEditor(): void;
}

export interface PropertyPanelHandle {
  refresh(): void;
  showErrors(errors: FieldError[]): void;
  root: HTMLElement;
}

interface ChipPayload {
  slot: string; // dotted path the chip may be dropped on
  value: string;
}

const SECTION_TITLES: Record<string, string> = {
  path: "skeleton",
  envelope: "envelope",
  mark: "marks",
  style: "style & seed",
};

// Defaults applied when the skeleton mode changes, so a freshly dropped
// mode renders instead of complaining about missing parameters.
export function applyMode(gene: Gene, info: PathModeInfo): Gene {
  const next: Gene = JSON.parse(JSON.stringify(gene));
  const keep = new Set(info.params);
  const path: Record<string, unknown> = { mode: info.mode };
  const old = next.path as unknown as Record<string, unknown>;
  for (const key of Object.keys(old)) {
    if (key !== "mode" && keep.has(key) && old[key] !== null && old[key] !== undefined) {
      path[key] = old[key];
    }
  }
  if (keep.has("order") && path.order == null) {
    path.order = 2;
    delete path.pointCount;
  }
  if (keep.has("pointCount") && path.pointCount == null && !keep.has("points")) {
    path.pointCount = ["sweep", "scan", "diagonal"].includes(info.mode) ? 16 : 6;
  }
  if (info.mode === "user_points" && !Array.isArray(path.points)) {
    path.points = [
      [0.1, 0.5],
      [0.5, 0.5],
      [0.9, 0.5],
    ];
  }
  next.path = path as never;
  return next;
}

function makeChip(payload: ChipPayload, label?: string): HTMLElement {
  const chip = document.createElement("span");
  chip.className = "chip";
  chip.textContent = label ?? payload.value;
  chip.draggable = true;
  chip.dataset.slot = payload.slot;
  chip.dataset.value = payload.value;
  chip.addEventListener("dragstart", (ev) => {
    ev.dataTransfer?.setData(CHIP_MIME, JSON.stringify(payload));
    chip.classList.add("dragging");
  });
  chip.addEventListener("dragend", () => chip.classList.remove("dragging"));
  // click-to-apply fallback for anyone who hates dragging
  chip.addEventListener("click", () => {
    chip.dispatchEvent(
      new CustomEvent("chip-apply", { bubbles: true, detail: payload }),
    );
  });
  return chip;
}

function acceptDrops(zone: HTMLElement, slot: string, apply: (value: string) => void): void {
  zone.addEventListener("dragover", (ev) => {
    const dt = ev.dataTransfer;
    if (dt && dt.types.includes(CHIP_MIME)) {
      ev.preventDefault();
      zone.classList.add("drop-ok");
    }
  });
  zone.addEventListener("dragleave", () => zone.classList.remove("drop-ok"));
  zone.addEventListener("drop", (ev) => {
    zone.classList.remove("drop-ok");
    const raw = ev.dataTransfer?.getData(CHIP_MIME);
    if (!raw) return;
    ev.preventDefault();
    let payload: ChipPayload;
    try {
      payload = JSON.parse(raw);
    } catch {
      return;
    }
    if (payload.slot === slot) apply(payload.value);
  });
}

export function buildPropertyPanel(
  root: HTMLElement,
  host: PanelHost,
  modes: PathModeInfo[],
): PropertyPanelHandle {
  root.innerHTML = "";
  root.classList.add("prop-panel");

  const generalErrors = document.createElement("div");
  generalErrors.className = "prop-general-errors";
  root.appendChild(generalErrors);

  // ---- skeleton mode picker (palette comes from the service) ----
  const modeSection = section("skeleton");
  const modeRow = document.createElement("div");
  modeRow.className = "prop-row";
  modeRow.dataset.path = "path.mode";
  const modeLabel = document.createElement("label");
  modeLabel.textContent = "mode";
  const modeSelect = document.createElement("select");
  modeSelect.className = "prop-input";
  for (const info of modes) {
    const opt = document.createElement("option");
    opt.value = info.mode;
    opt.textContent = info.mode;
    opt.title = info.description;
    modeSelect.appendChild(opt);
  }
  const applyModeValue = (value: string) => {
    const info = modes.find((m) => m.mode === value);
    if (!info) return;
    if (value === "user_points") host.openPathEditor();
    host.commit("@mode", value); // app resolves via applyMode
  };
  modeSelect.addEventListener("change", () => applyModeValue(modeSelect.value));
  const modeHint = hintLine("the skeleton the marks march along");
  const modeError = errorLine();
  modeRow.append(modeLabel, modeSelect, modeHint, modeError);
  acceptDrops(modeRow, "path.mode", applyModeValue);
  modeSection.appendChild(modeRow);

  const modeChips = document.createElement("div");
  modeChips.className = "chip-tray";
  for (const info of modes) {
    const chip = makeChip({ slot: "path.mode", value: info.mode });
    chip.title = info.description;
    modeChips.appendChild(chip);
  }
  modeSection.appendChild(modeChips);
  root.appendChild(modeSection);

  // ---- everything else from the manifest ----
  const sections: Record<string, HTMLElement> = { path: modeSection };
  const controls = new Map<string, { row: HTMLElement; input: HTMLInputElement | HTMLSelectElement; def: PropertyDef }>();

  for (const def of PROPERTIES) {
    let sec = sections[def.section];
    if (!sec) {
      sec = section(SECTION_TITLES[def.section] ?? def.section);
      sections[def.section] = sec;
      root.appendChild(sec);
    }
    const row = document.createElement("div");
    row.className = "prop-row";
    row.dataset.path = def.path;
    const label = document.createElement("label");
    label.textContent = def.label;

    let input: HTMLInputElement | HTMLSelectElement;
    if (def.kind === "enum") {
      const select = document.createElement("select");
      for (const o of def.options ?? []) {
        const opt = document.createElement("option");
        opt.value = o;
        opt.textContent = o;
        select.appendChild(opt);
      }
      select.addEventListener("change", () => host.commit(def.path, select.value));
      acceptDrops(row, def.path, (v) => host.commit(def.path, v));
      input = select;
    } else if (def.kind === "toggle") {
      const box = document.createElement("input");
      box.type = "checkbox";
      box.addEventListener("change", () => host.commit(def.path, box.checked));
      input = box;
    } else if (def.kind === "number") {
      const num = document.createElement("input");
      num.type = "number";
      if (def.min !== undefined) num.min = String(def.min);
      if (def.max !== undefined) num.max = String(def.max);
      if (def.step !== undefined) num.step = String(def.step);
      num.addEventListener("change", () => {
        if (num.value === "" && def.optional) {
          host.commit(def.path, undefined);
        } else {
          host.commit(def.path, Number(num.value));
        }
      });
      input = num;
    } else {
      const text = document.createElement("input");
      text.type = "text";
      text.addEventListener("change", () => host.commit(def.path, text.value));
      input = text;
    }
    input.classList.add("prop-input");
    row.append(label, input, hintLine(def.hint), errorLine());
    sec.appendChild(row);
    controls.set(def.path, { row, input, def });

    // enum properties also get a chip tray under the control
    if (def.kind === "enum" && def.options) {
      const tray = document.createElement("div");
      tray.className = "chip-tray";
      for (const o of def.options) tray.appendChild(makeChip({ slot: def.path, value: o }));
      sec.appendChild(tray);
    }
  }

  // open-the-point-editor button lives with the skeleton section
  const editPoints = document.createElement("button");
  editPoints.type = "button";
  editPoints.className = "ghost-btn";
  editPoints.textContent = "place points by hand…";
  editPoints.addEventListener("click", () => host.openPathEditor());
  modeSection.appendChild(editPoints);

  // chip click fallback routes through the same commit as a drop
  root.addEventListener("chip-apply", (ev) => {
    const { slot, value } = (ev as CustomEvent<ChipPayload>).detail;
    if (slot === "path.mode") applyModeValue(value);
    else host.commit(slot, value);
  });

  function refresh(): void {
    const gene = host.getGene();
    modeSelect.value = String(getAtPath(gene, "path.mode") ?? "inline_linear");
    for (const { input, def } of controls.values()) {
      const value = getAtPath(gene, def.path);
      if (input instanceof HTMLSelectElement) {
        input.value = value == null ? "" : String(value);
      } else if (input.type === "checkbox") {
        input.checked = Boolean(value);
      } else {
        input.value = value == null ? "" : String(value);
      }
    }
  }

  function showErrors(errors: FieldError[]): void {
    for (const row of root.querySelectorAll<HTMLElement>(".prop-row")) {
      row.classList.remove("has-error");
      const slot = row.querySelector<HTMLElement>(".prop-error");
      if (slot) slot.textContent = "";
    }
    generalErrors.textContent = "";
    const leftovers: string[] = [];
    for (const err of errors) {
      const normalised = normaliseErrorPath(err.path);
      const row = findRow(root, normalised);
      if (row) {
        row.classList.add("has-error");
        const slot = row.querySelector<HTMLElement>(".prop-error");
        if (slot) slot.textContent = err.message;
      } else {
        leftovers.push(`${err.path}: ${err.message}`);
      }
    }
    generalErrors.textContent = leftovers.join(" · ");
  }

  refresh();
  return { refresh, showErrors, root };
}

function findRow(root: HTMLElement, errPath: string): HTMLElement | null {
  // exact match first, then walk up the path (mark.shape ← mark.shape.x)
  let candidate = errPath;
  while (candidate) {
    const row = root.querySelector<HTMLElement>(`.prop-row[data-path="${candidate}"]`);
    if (row) return row;
    const cut = candidate.lastIndexOf(".");
    if (cut < 0) break;
    candidate = candidate.slice(0, cut);
  }
  return null;
}

function section(title: string): HTMLElement {
  const el = document.createElement("section");
  el.className = "prop-section";
  const h = document.createElement("h3");
  h.textContent = title;
  el.appendChild(h);
  return el;
}

function hintLine(text: string): HTMLElement {
  const el = document.createElement("div");
  el.className = "prop-hint";
  el.textContent = text;
  return el;
}

function errorLine(): HTMLElement {
  const el = document.createElement("div");
  el.className = "prop-error";
  return el;
}
