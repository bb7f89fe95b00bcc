// Click-to-place path editor. Clicks drop vertices in unit coordinates
// (y up, like the engine); shift-click or double-click flags the edge
// *arriving* at the new point as a jump — the pen lifts, no ink, no mark.
// Commit turns the sketch into a user_points skeleton on the draft.

export interface PathEditorHost {
  commitPoints(points: [number, number][], jumps: number[]): void;
}

export interface PathEditorHandle {
  open(existing?: { points?: [number, number][] | null; jumps?: number[] }): void;
  close(): void;
  isOpen(): boolean;
  /** current sketch, exposed for tests */
  sketch(): { points: [number, number][]; jumps: number[] };
  root: HTMLElement;
}

export function buildPathEditor(root: HTMLElement, host: PathEditorHost): PathEditorHandle {
  root.classList.add("path-editor");
  root.hidden = true;

  let points: [number, number][] = [];
  let jumps: number[] = [];
  let penUp = false; // armed by the "lift pen" button: next edge becomes a jump

  root.innerHTML = `
    <div class="path-editor-bar">
      <strong>place points</strong>
      <span class="path-editor-help">click to add · shift-click / double-click = jump there · esc closes</span>
      <button type="button" data-act="pen">lift pen</button>
      <button type="button" data-act="undo">undo</button>
      <button type="button" data-act="clear">clear</button>
      <button type="button" data-act="commit">use this path</button>
      <button type="button" data-act="close">close</button>
    </div>
    <canvas class="path-editor-canvas" width="420" height="420"></canvas>
    <div class="path-editor-status"></div>
  `;

  const canvas = root.querySelector<HTMLCanvasElement>("canvas")!;
  const status = root.querySelector<HTMLElement>(".path-editor-status")!;
  const penBtn = root.querySelector<HTMLButtonElement>('[data-act="pen"]')!;

  function toUnit(ev: MouseEvent): [number, number] {
    const box = canvas.getBoundingClientRect();
    const w = box.width || canvas.width || 1;
    const h = box.height || canvas.height || 1;
    const x = (ev.clientX - box.left) / w;
    const y = 1 - (ev.clientY - box.top) / h; // canvas y grows down; ours grows up
    const clamp = (v: number) => Math.min(1, Math.max(0, v));
    return [round3(clamp(x)), round3(clamp(y))];
  }

  function addPoint(p: [number, number], jumpHere: boolean): void {
    if (points.length > 0 && (jumpHere || penUp)) {
      jumps.push(points.length - 1); // the edge from the previous point to this one
    }
    penUp = false;
    penBtn.classList.remove("armed");
    points.push(p);
    redraw();
  }

  canvas.addEventListener("click", (ev) => {
    addPoint(toUnit(ev), ev.shiftKey);
  });
  canvas.addEventListener("dblclick", (ev) => {
    // the dblclick already placed a point via the click handler; retag the
    // edge leading to it as a jump instead of adding another vertex
    ev.preventDefault();
    if (points.length >= 2) {
      const edge = points.length - 2;
      if (!jumps.includes(edge)) jumps.push(edge);
      redraw();
    }
  });

  root.querySelector('[data-act="pen"]')!.addEventListener("click", () => {
    penUp = !penUp;
    penBtn.classList.toggle("armed", penUp);
  });
  root.querySelector('[data-act="undo"]')!.addEventListener("click", () => {
    points.pop();
    jumps = jumps.filter((j) => j < points.length - 1);
    redraw();
  });
  root.querySelector('[data-act="clear"]')!.addEventListener("click", () => {
    points = [];
    jumps = [];
    penUp = false;
    penBtn.classList.remove("armed");
    redraw();
  });
  root.querySelector('[data-act="commit"]')!.addEventListener("click", () => {
    if (points.length < 2) {
      status.textContent = "need at least two points";
      return;
    }
    host.commitPoints(points.slice(), [...jumps].sort((a, b) => a - b));
    close();
  });
  root.querySelector('[data-act="close"]')!.addEventListener("click", () => close());
  document.addEventListener("keydown", (ev) => {
    if (ev.key === "Escape" && !root.hidden) close();
  });

  function redraw(): void {
    status.textContent = points.length
      ? `${points.length} point${points.length === 1 ? "" : "s"}, ${jumps.length} jump${jumps.length === 1 ? "" : "s"}`
      : "empty";
    let ctx: CanvasRenderingContext2D | null = null;
    try {
      ctx = canvas.getContext("2d");
    } catch {
      // headless test environments have no 2d context
    }
    if (!ctx) return;
    const w = canvas.width;
    const h = canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.strokeStyle = "#e4e0d6";
    ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
    const dev = (p: [number, number]) => [p[0] * w, (1 - p[1]) * h] as const;
    for (let i = 0; i + 1 < points.length; i++) {
      const [x1, y1] = dev(points[i]!);
      const [x2, y2] = dev(points[i + 1]!);
      ctx.beginPath();
      ctx.setLineDash(jumps.includes(i) ? [5, 4] : []);
      ctx.strokeStyle = jumps.includes(i) ? "#b0a995" : "#4a4234";
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    }
    ctx.setLineDash([]);
    ctx.fillStyle = "#8a513d";
    for (const p of points) {
      const [x, y] = dev(p);
      ctx.beginPath();
      ctx.arc(x, y, 4, 0, Math.PI * 2);
      ctx.fill();
    }
  }

  function open(existing?: { points?: [number, number][] | null; jumps?: number[] }): void {
    if (existing?.points?.length) {
      points = existing.points.map((p) => [p[0], p[1]]);
      jumps = [...(existing.jumps ?? [])];
    }
    root.hidden = false;
    redraw();
  }

  function close(): void {
    root.hidden = true;
  }

  return {
    open,
    close,
    isOpen: () => !root.hidden,
    sketch: () => ({ points: points.map((p) => [p[0], p[1]] as [number, number]), jumps: [...jumps] }),
    root,
  };
}

function round3(v: number): number {
  return Math.round(v * 1000) / 1000;
}
