// Preview pane. Holds exactly what the service last sent — bytes, text and
// the X-Genii-Hash that came with them — and swaps all of it in one go.
// Export hands out those same bytes untouched, which is why a saved file
// hashes identically to a CLI render of the same gene and data.

import type { Gene, RenderResult } from "./types";

const GENE_COMMENT = /genii:gene:v1:base64:([A-Za-z0-9+/=]+)/;

export interface PreviewHandle {
  swap(result: RenderResult, gene: Gene): void;
  current(): { result: RenderResult; gene: Gene } | null;
  /** the exact bytes a download would contain, or null before first render */
  exportBytes(): { bytes: Uint8Array; filename: string } | null;
  setBusy(busy: boolean): void;
  setTrouble(message: string | null): void;
  root: HTMLElement;
}

/** Pull the embedded design back out of a rendered document. */
export function extractGeneFromSvg(svgText: string): Gene {
  const m = GENE_COMMENT.exec(svgText);
  if (!m) throw new Error("no embedded gene found in document");
  const raw = atob(m[1]!);
  const bytes = Uint8Array.from(raw, (c) => c.charCodeAt(0));
  return JSON.parse(new TextDecoder().decode(bytes)) as Gene;
}

export function buildPreview(
  root: HTMLElement,
  opts?: { onImport?: (gene: Gene) => void },
): PreviewHandle {
  root.classList.add("preview-pane");
  root.innerHTML = `
    <div class="preview-stage"><div class="preview-empty">nothing rendered yet</div></div>
    <div class="preview-footer">
      <code class="preview-hash" title="SHA-256 the service computed for these bytes"></code>
      <span class="preview-busy" hidden>rendering…</span>
      <span class="preview-trouble" hidden></span>
      <button type="button" class="preview-export" disabled>export SVG</button>
      <label class="preview-import-label">
        open exported SVG<input type="file" class="preview-import" accept=".svg,image/svg+xml" hidden>
      </label>
    </div>
  `;

  const stage = root.querySelector<HTMLElement>(".preview-stage")!;
  const hashEl = root.querySelector<HTMLElement>(".preview-hash")!;
  const busyEl = root.querySelector<HTMLElement>(".preview-busy")!;
  const troubleEl = root.querySelector<HTMLElement>(".preview-trouble")!;
  const exportBtn = root.querySelector<HTMLButtonElement>(".preview-export")!;
  const importInput = root.querySelector<HTMLInputElement>(".preview-import")!;

  let held: { result: RenderResult; gene: Gene } | null = null;

  function swap(result: RenderResult, gene: Gene): void {
    // one synchronous block: image, hash and export payload change together
    held = { result, gene };
    stage.innerHTML = result.text;
    hashEl.textContent = result.hash ? result.hash.slice(0, 16) + "…" : "";
    hashEl.dataset.fullHash = result.hash;
    exportBtn.disabled = false;
    troubleEl.hidden = true;
  }

  function exportBytes(): { bytes: Uint8Array; filename: string } | null {
    if (!held) return null;
    const name = (held.gene.name ?? "design").replace(/[^\w.-]+/g, "_") || "design";
    return { bytes: held.result.bytes, filename: `${name}.svg` };
  }

  exportBtn.addEventListener("click", () => {
    const payload = exportBytes();
    if (!payload) return;
    // plain anchor download; guarded because object URLs don't exist headless
    if (typeof URL.createObjectURL !== "function") return;
    const blob = new Blob([payload.bytes.slice().buffer], { type: "image/svg+xml" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = payload.filename;
    a.click();
    setTimeout(() => URL.revokeObjectURL(url), 1000);
  });

  importInput.addEventListener("change", async () => {
    const file = importInput.files?.[0];
    importInput.value = "";
    if (!file || !opts?.onImport) return;
    try {
      const gene = extractGeneFromSvg(await file.text());
      opts.onImport(gene);
    } catch (err) {
      troubleEl.textContent = err instanceof Error ? err.message : String(err);
      troubleEl.hidden = false;
    }
  });

  return {
    swap,
    current: () => held,
    exportBytes,
    setBusy: (busy) => {
      busyEl.hidden = !busy;
    },
    setTrouble: (message) => {
      if (message === null) {
        troubleEl.hidden = true;
      } else {
        troubleEl.textContent = message;
        troubleEl.hidden = false;
      }
    },
    root,
  };
}
