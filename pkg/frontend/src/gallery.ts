// Gallery: the stored-gene library. Likes go straight to the service and
// the card re-reflects whatever the server answered, so the heart you see
// is always the persisted state. Each card shows the gene's colour chips —
// the quickest way to tell which gene made which picture.

import { listGenes, saveGene, setLiked, ServiceError } from "./api";
import type { Gene, StoredGene } from "./types";

export interface GalleryHost {
  currentGene(): Gene;
  /** load a stored gene into the editor as the new working draft */
  copyToEditor(gene: Gene): void;
  toast(message: string): void;
}

export interface GalleryHandle {
  reload(): Promise<void>;
  root: HTMLElement;
}

function colourChips(gene: Gene): string[] {
  for (const m of gene.mappings ?? []) {
    if (m.channel !== "colour") continue;
    if (m.palette?.length) return m.palette.slice(0, 5);
    if (m.gradient?.length) return m.gradient.map((s) => s.colour).slice(0, 5);
    if (typeof m.constant === "string") return [m.constant];
  }
  return ["#4a4234"];
}

export function buildGallery(root: HTMLElement, host: GalleryHost): GalleryHandle {
  root.classList.add("gallery-pane");
  root.innerHTML = `
    <div class="gallery-bar">
      <h3>gallery</h3>
      <button type="button" class="gallery-save">keep current gene</button>
    </div>
    <div class="gallery-list"></div>
  `;
  const list = root.querySelector<HTMLElement>(".gallery-list")!;

  root.querySelector(".gallery-save")!.addEventListener("click", async () => {
    try {
      await saveGene(host.currentGene());
      await reload();
    } catch (err) {
      host.toast(err instanceof Error ? err.message : String(err));
    }
  });

  function card(item: StoredGene): HTMLElement {
    const el = document.createElement("div");
    el.className = "gallery-card";
    el.dataset.id = item.id;

    const chips = document.createElement("div");
    chips.className = "gallery-chips";
    for (const c of colourChips(item.gene)) {
      const dot = document.createElement("span");
      dot.className = "gallery-chip";
      dot.style.background = c;
      chips.appendChild(dot);
    }

    const name = document.createElement("div");
    name.className = "gallery-name";
    name.textContent = item.gene.name ?? "(unnamed)";

    const meta = document.createElement("div");
    meta.className = "gallery-meta";
    meta.textContent = `${item.gene.path?.mode ?? "?"} · ${item.gene.mark?.shape ?? "?"}`;

    const heart = document.createElement("button");
    heart.type = "button";
    heart.className = "gallery-heart";
    const paint = (liked: boolean) => {
      heart.textContent = liked ? "♥" : "♡";
      heart.classList.toggle("liked", liked);
      heart.setAttribute("aria-pressed", String(liked));
    };
    paint(item.liked);
    heart.addEventListener("click", async () => {
      try {
        const updated = await setLiked(item.id, !heart.classList.contains("liked"));
        paint(updated.liked); // trust the server's answer, not our guess
      } catch (err) {
        if (err instanceof ServiceError && err.status === 404) {
          host.toast("that gene is gone from the library");
          await reload();
        } else {
          host.toast(err instanceof Error ? err.message : String(err));
        }
      }
    });

    const copy = document.createElement("button");
    copy.type = "button";
    copy.className = "gallery-copy";
    copy.textContent = "edit a copy";
    copy.addEventListener("click", () => host.copyToEditor(JSON.parse(JSON.stringify(item.gene))));

    el.append(chips, name, meta, heart, copy);
    return el;
  }

  async function reload(): Promise<void> {
    let items: StoredGene[];
    try {
      items = await listGenes();
    } catch (err) {
      host.toast(err instanceof Error ? err.message : String(err));
      return;
    }
    list.innerHTML = "";
    if (!items.length) {
      const empty = document.createElement("div");
      empty.className = "gallery-empty";
      empty.textContent = "nothing kept yet";
      list.appendChild(empty);
      return;
    }
    for (const item of items) list.appendChild(card(item));
  }

  return { reload, root };
}
