// One render in flight, ever. Edits are debounced; a newer edit aborts the
// older request; a response only lands if it is still the newest. The
// preview callback gets bytes + server hash together, so whatever is on
// screen always carries the hash the service computed for those bytes —
// an invalid draft reports errors and leaves the last good preview alone.

import { renderGene, validateGene, ServiceError } from "./api";
import type { Dataset, FieldError, Gene, RenderResult } from "./types";

export interface RenderLoopHooks {
  onPreview: (result: RenderResult, gene: Gene, data: Dataset | null) => void;
  onErrors: (errors: FieldError[]) => void;
  onBusy?: (busy: boolean) => void;
  /** network/server trouble that is not a field error (service down, 500) */
  onTrouble?: (message: string) => void;
}

export class RenderLoop {
  private hooks: RenderLoopHooks;
  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private seq = 0;
  private settled: Promise<void> = Promise.resolve();
  private settledResolve: (() => void) | null = null;

  constructor(hooks: RenderLoopHooks, debounceMs = 250) {
    this.hooks = hooks;
    this.debounceMs = debounceMs;
  }

  /** Debounced entry point for every draft edit. */
  schedule(gene: Gene, data: Dataset | null): void {
    if (this.timer) clearTimeout(this.timer);
    this.armSettled();
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(gene, data);
    }, this.debounceMs);
  }

  /** Immediate render (initial load, gallery copy-in). */
  renderNow(gene: Gene, data: Dataset | null): void {
    if (this.timer) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.armSettled();
    void this.fire(gene, data);
  }

  /** Resolves once no request is pending or in flight (for tests). */
  idle(): Promise<void> {
    return this.settled;
  }

  private armSettled(): void {
    if (!this.settledResolve) {
      this.settled = new Promise((resolve) => {
        this.settledResolve = resolve;
      });
    }
  }

  private finishIfQuiet(seq: number): void {
    if (seq === this.seq && this.timer === null && this.settledResolve) {
      this.settledResolve();
      this.settledResolve = null;
    }
  }

  private async fire(gene: Gene, data: Dataset | null): Promise<void> {
    const mySeq = ++this.seq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    this.hooks.onBusy?.(true);
    try {
      const verdict = await validateGene(gene, data, controller.signal);
      if (mySeq !== this.seq) return;
      if (!verdict.valid) {
        this.hooks.onErrors(verdict.errors);
        return;
      }
      const result = await renderGene(gene, data, undefined, controller.signal);
      if (mySeq !== this.seq) return; // superseded while we waited
      this.hooks.onErrors([]);
      this.hooks.onPreview(result, gene, data);
    } catch (err) {
      if (mySeq !== this.seq) return;
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (err instanceof ServiceError) {
        if (err.errors.length) {
          this.hooks.onErrors(err.errors);
        } else {
          this.hooks.onTrouble?.(err.message);
        }
      } else {
        this.hooks.onTrouble?.(err instanceof Error ? err.message : String(err));
      }
    } finally {
      if (mySeq === this.seq) this.hooks.onBusy?.(false);
      this.finishIfQuiet(mySeq);
    }
  }
}
