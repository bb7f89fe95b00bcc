// Thin typed client for the render service. The UI never draws anything
// itself: every preview byte comes out of POST /render, which is what makes
// browser exports identical to CLI renders.

import type {
  Dataset,
  FieldError,
  Gene,
  PathModeInfo,
  RenderResult,
  StoredGene,
} from "./types";

let baseUrl = defaultBase();

function defaultBase(): string {
  if (typeof window !== "undefined" && window.location) {
    const q = new URLSearchParams(window.location.search).get("api");
    if (q) return q.replace(/\/$/, "");
    // Served by something other than the render service itself (the vite dev
    // server, a file://) → assume the default service address.
    if (window.location.port && window.location.port !== "8765") {
      return "http://127.0.0.1:8765";
    }
    return "";
  }
  return "http://127.0.0.1:8765";
}

export function setApiBase(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

export function apiBase(): string {
  return baseUrl;
}

/** Raised for 4xx/422 responses that carry the service's error envelope. */
export class ServiceError extends Error {
  status: number;
  path: string;
  errors: FieldError[];

  constructor(status: number, path: string, message: string, errors: FieldError[]) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
    this.path = path;
    this.errors = errors;
  }
}

async function throwEnvelope(resp: Response): Promise<never> {
  let path = "";
  let message = `${resp.status} ${resp.statusText}`;
  let errors: FieldError[] = [];
  try {
    const body = await resp.json();
    if (body && body.error) {
      path = body.error.path ?? "";
      message = body.error.message ?? message;
      errors = body.error.errors ?? [];
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ServiceError(resp.status, path, message, errors);
}

export interface RenderRequestOptions {
  dpi?: number;
  background?: string;
  debugPath?: boolean;
}

export async function renderGene(
  gene: Gene,
  data: Dataset | null,
  options?: RenderRequestOptions,
  signal?: AbortSignal,
): Promise<RenderResult> {
  const payload: Record<string, unknown> = { gene };
  if (data) payload.data = data;
  if (options && Object.keys(options).length) payload.options = options;
  const resp = await fetch(`${baseUrl}/render`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  });
  if (!resp.ok) await throwEnvelope(resp);
  const hash = resp.headers.get("X-Genii-Hash") ?? "";
  const bytes = new Uint8Array(await resp.arrayBuffer());
  const text = new TextDecoder().decode(bytes);
  return { bytes, text, hash };
}

export async function validateGene(
  gene: Gene,
  data?: Dataset | null,
  signal?: AbortSignal,
): Promise<{ valid: boolean; errors: FieldError[] }> {
  const payload: Record<string, unknown> = { gene };
  if (data) payload.data = data;
  const resp = await fetch(`${baseUrl}/validate`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  });
  if (!resp.ok) await throwEnvelope(resp);
  return resp.json();
}

export async function fetchPathModes(): Promise<PathModeInfo[]> {
  const resp = await fetch(`${baseUrl}/paths`);
  if (!resp.ok) await throwEnvelope(resp);
  const body = await resp.json();
  return body.paths;
}

export async function listGenes(): Promise<StoredGene[]> {
  const resp = await fetch(`${baseUrl}/genes`);
  if (!resp.ok) await throwEnvelope(resp);
  const body = await resp.json();
  return body.genes;
}

export async function saveGene(gene: Gene): Promise<StoredGene> {
  const resp = await fetch(`${baseUrl}/genes`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ gene }),
  });
  if (!resp.ok) await throwEnvelope(resp);
  return resp.json();
}

export async function setLiked(id: string, liked: boolean): Promise<StoredGene> {
  const resp = await fetch(`${baseUrl}/genes/${id}`, {
    method: "PATCH",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ liked }),
  });
  if (!resp.ok) await throwEnvelope(resp);
  return resp.json();
}
