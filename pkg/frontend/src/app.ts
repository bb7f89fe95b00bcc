// Wires the panels together around one EditorState: a working gene draft,
// a dataset draft, the last good preview (bytes + server hash), and the
// gallery. Every edit funnels through commit() → validate → render, so the
// preview can never show bytes the service didn't produce.

import { fetchPathModes } from "./api";
import { clone, defaultGene, demoDataset, setAtPath } from "./draft";
import { buildGallery, type GalleryHandle } from "./gallery";
import { buildPathEditor, type PathEditorHandle } from "./pathEditor";
import { applyMode, buildPropertyPanel, type PropertyPanelHandle } from "./propertyPanel";
import { buildPreview, type PreviewHandle } from "./preview";
import { RenderLoop } from "./renderLoop";
import type { Dataset, Gene, PathModeInfo } from "./types";

export interface App {
  gene(): Gene;
  dataset(): Dataset;
  loop: RenderLoop;
  panel: PropertyPanelHandle;
  preview: PreviewHandle;
  gallery: GalleryHandle;
  pathEditor: PathEditorHandle;
  commit(path: string, value: unknown): void;
  loadGene(gene: Gene): void;
}

export async function boot(root: HTMLElement, debounceMs = 250): Promise<App> {
  const modes: PathModeInfo[] = await fetchPathModes();

  let gene = defaultGene();
  let dataset = demoDataset();

  root.innerHTML = `
    <header class="app-header">
      <h1>genii builder</h1>
      <span class="app-toast" hidden></span>
    </header>
    <main class="app-main">
      <aside class="app-left"></aside>
      <section class="app-center">
        <div class="app-preview"></div>
        <div class="app-path-editor"></div>
        <div class="app-data"></div>
      </section>
      <aside class="app-right"></aside>
    </main>
  `;

  const toastEl = root.querySelector<HTMLElement>(".app-toast")!;
  let toastTimer: ReturnType<typeof setTimeout> | null = null;
  function toast(message: string): void {
    toastEl.textContent = message;
    toastEl.hidden = false;
    if (toastTimer) clearTimeout(toastTimer);
    toastTimer = setTimeout(() => {
      toastEl.hidden = true;
    }, 4000);
  }

  const preview = buildPreview(root.querySelector<HTMLElement>(".app-preview")!, {
    onImport: (g) => loadGene(g),
  });

  const loop = new RenderLoop(
    {
      onPreview: (result, g) => {
        preview.swap(result, g);
        preview.setTrouble(null);
      },
      onErrors: (errors) => panel.showErrors(errors),
      onBusy: (busy) => preview.setBusy(busy),
      onTrouble: (message) => preview.setTrouble(message),
    },
    debounceMs,
  );

  const pathEditor = buildPathEditor(root.querySelector<HTMLElement>(".app-path-editor")!, {
    commitPoints: (points, jumps) => {
      gene = clone(gene);
      gene.path = { mode: "user_points", points, jumps };
      panel.refresh();
      loop.schedule(gene, dataset);
    },
  });

  function commit(path: string, value: unknown): void {
    if (path === "@mode") {
      const info = modes.find((m) => m.mode === value);
      if (!info) return;
      gene = applyMode(gene, info);
    } else {
      gene = setAtPath(gene, path, value);
    }
    panel.refresh();
    loop.schedule(gene, dataset);
  }

  const panel = buildPropertyPanel(
    root.querySelector<HTMLElement>(".app-left")!,
    {
      getGene: () => gene,
      commit,
      openPathEditor: () => {
        const existing = gene.path.mode === "user_points" ? gene.path : undefined;
        pathEditor.open(existing ? { points: existing.points, jumps: existing.jumps } : undefined);
      },
    },
    modes,
  );

  const gallery = buildGallery(root.querySelector<HTMLElement>(".app-right")!, {
    currentGene: () => clone(gene),
    copyToEditor: (g) => loadGene(g),
    toast,
  });

  function loadGene(g: Gene): void {
    gene = clone(g);
    panel.refresh();
    panel.showErrors([]);
    loop.renderNow(gene, dataset);
  }

  buildDataPanel(root.querySelector<HTMLElement>(".app-data")!, {
    get: () => dataset,
    set: (d) => {
      dataset = d;
      loop.schedule(gene, dataset);
    },
  });

  void gallery.reload();
  loop.renderNow(gene, dataset);

  return {
    gene: () => gene,
    dataset: () => dataset,
    loop,
    panel,
    preview,
    gallery,
    pathEditor,
    commit,
    loadGene,
  };
}

// --- small dataset editor: one row per category ---

interface DataHost {
  get(): Dataset;
  set(d: Dataset): void;
}

function buildDataPanel(root: HTMLElement, host: DataHost): void {
  root.classList.add("data-panel");

  function redraw(): void {
    const data = host.get();
    root.innerHTML = `<h3>data</h3>`;
    const table = document.createElement("div");
    table.className = "data-rows";
    data.categories.forEach((cat, i) => {
      const row = document.createElement("div");
      row.className = "data-row";
      const name = input("text", cat.name);
      const value = input("number", String(cat.value));
      const range = input("number", String(cat.range));
      const del = document.createElement("button");
      del.type = "button";
      del.textContent = "×";
      del.title = "remove this category";
      const push = () => {
        const next = JSON.parse(JSON.stringify(host.get())) as Dataset;
        next.categories[i] = {
          name: name.value || `c${i}`,
          value: Number(value.value),
          range: Number(range.value),
        };
        host.set(next);
      };
      name.addEventListener("change", push);
      value.addEventListener("change", push);
      range.addEventListener("change", push);
      del.addEventListener("click", () => {
        const next = JSON.parse(JSON.stringify(host.get())) as Dataset;
        next.categories.splice(i, 1);
        host.set(next);
        redraw();
      });
      row.append(name, value, range, del);
      table.appendChild(row);
    });
    root.appendChild(table);
    const add = document.createElement("button");
    add.type = "button";
    add.className = "ghost-btn";
    add.textContent = "add category";
    add.addEventListener("click", () => {
      const next = JSON.parse(JSON.stringify(host.get())) as Dataset;
      const n = next.categories.length;
      next.categories.push({ name: `c${n}`, value: 50, range: 100 });
      host.set(next);
      redraw();
    });
    root.appendChild(add);
  }

  function input(type: string, value: string): HTMLInputElement {
    const el = document.createElement("input");
    el.type = type;
    el.value = value;
    return el;
  }

  redraw();
}
