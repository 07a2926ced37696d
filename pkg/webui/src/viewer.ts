/** Canvas semantic viewer: a pannable, zoomable document point cloud.
 *
 * Points are drawn on a single canvas (no DOM node per point) so large
 * corpora stay interactive. Clicking a point selects the document; the
 * current search hits render in a highlight style. Rendering degrades to
 * a no-op when the 2D context is unavailable (headless tests) while all
 * state and hit-testing stay exact.
 */

import {
  Transform,
  dataToScreen,
  fitBounds,
  nearestPointIndex,
  pan,
  zoomAt,
} from "./transform.js";
import type { ProjectionPoint } from "./types.js";

const HIT_RADIUS_PX = 8;
const CLICK_SLOP_PX = 3;

export class SemanticViewer {
  readonly canvas: HTMLCanvasElement;
  readonly placeholder: HTMLDivElement;
  private readonly tooltip: HTMLDivElement;
  private points: ProjectionPoint[] = [];
  private ids = new Set<string>();
  private highlighted = new Set<string>();
  private hovered: string | null = null;
  private selected: string | null = null;
  private viewTransform: Transform = { scale: 1, tx: 0, ty: 0 };
  private dragFrom: { x: number; y: number } | null = null;
  private dragMoved = 0;
  private readonly ctx: CanvasRenderingContext2D | null;

  onSelect: (docId: string) => void = () => {};

  constructor(
    container: HTMLElement,
    private readonly width = 640,
    private readonly height = 460,
  ) {
    this.canvas = document.createElement("canvas");
    this.canvas.width = width;
    this.canvas.height = height;
    this.canvas.className = "viewer-canvas";
    this.placeholder = document.createElement("div");
    this.placeholder.className = "viewer-placeholder";
    this.placeholder.hidden = true;
    this.tooltip = document.createElement("div");
    this.tooltip.className = "viewer-tooltip";
    this.tooltip.hidden = true;
    container.append(this.canvas, this.placeholder, this.tooltip);
    let ctx: CanvasRenderingContext2D | null = null;
    try {
      ctx = this.canvas.getContext("2d");
    } catch {
      ctx = null; // headless environment without canvas support
    }
    this.ctx = ctx;
    this.wireEvents();
  }

  get transform(): Transform {
    return { ...this.viewTransform };
  }

  get pointCount(): number {
    return this.points.length;
  }

  get highlightedIds(): Set<string> {
    return new Set(this.highlighted);
  }

  get hoveredId(): string | null {
    return this.hovered;
  }

  setPoints(points: ProjectionPoint[]): void {
    this.points = points;
    this.ids = new Set(points.map((p) => p.doc_id));
    this.highlighted = new Set(
      [...this.highlighted].filter((id) => this.ids.has(id)),
    );
    this.viewTransform = fitBounds(points, this.width, this.height);
    this.canvas.hidden = false;
    this.placeholder.hidden = true;
    this.render();
  }

  /** Mark search hits; unknown ids are dropped (highlighted ⊆ loaded). */
  setHighlight(docIds: Iterable<string>): void {
    this.highlighted = new Set([...docIds].filter((id) => this.ids.has(id)));
    this.render();
  }

  setSelected(docId: string | null): void {
    this.selected = docId !== null && this.ids.has(docId) ? docId : null;
    this.render();
  }

  /** Pan so the document's point lands at the canvas center. */
  recenter(docId: string): void {
    const point = this.points.find((p) => p.doc_id === docId);
    if (!point) return;
    const screen = dataToScreen(this.viewTransform, point);
    this.viewTransform = pan(
      this.viewTransform,
      this.width / 2 - screen.x,
      this.height / 2 - screen.y,
    );
    this.render();
  }

  /** Hide the viewer with an explanation (projection unavailable). */
  showUnavailable(message: string): void {
    this.canvas.hidden = true;
    this.tooltip.hidden = true;
    this.placeholder.hidden = false;
    this.placeholder.textContent = message;
  }

  hitTest(sx: number, sy: number): ProjectionPoint | null {
    const index = nearestPointIndex(this.points, this.viewTransform, sx, sy, HIT_RADIUS_PX);
    return index >= 0 ? this.points[index] : null;
  }

  private canvasPosition(event: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  }

  private wireEvents(): void {
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      const position = this.canvasPosition(event);
      const factor = event.deltaY < 0 ? 1.2 : 1 / 1.2;
      this.viewTransform = zoomAt(this.viewTransform, position.x, position.y, factor);
      this.render();
    });
    this.canvas.addEventListener("mousedown", (event) => {
      this.dragFrom = this.canvasPosition(event);
      this.dragMoved = 0;
    });
    this.canvas.addEventListener("mousemove", (event) => {
      const position = this.canvasPosition(event);
      if (this.dragFrom) {
        const dx = position.x - this.dragFrom.x;
        const dy = position.y - this.dragFrom.y;
        this.dragMoved += Math.hypot(dx, dy);
        this.viewTransform = pan(this.viewTransform, dx, dy);
        this.dragFrom = position;
        this.render();
        return;
      }
      const point = this.hitTest(position.x, position.y);
      this.hovered = point ? point.doc_id : null;
      if (point) {
        this.tooltip.textContent = point.title;
        this.tooltip.style.left = `${position.x + 12}px`;
        this.tooltip.style.top = `${position.y + 12}px`;
        this.tooltip.hidden = false;
      } else {
        this.tooltip.hidden = true;
      }
      this.render();
    });
    const endDrag = (event: MouseEvent) => {
      if (!this.dragFrom) return;
      const wasClick = this.dragMoved <= CLICK_SLOP_PX;
      this.dragFrom = null;
      if (wasClick) {
        const position = this.canvasPosition(event);
        const point = this.hitTest(position.x, position.y);
        if (point) this.onSelect(point.doc_id);
      }
    };
    this.canvas.addEventListener("mouseup", endDrag);
    this.canvas.addEventListener("mouseleave", () => {
      this.dragFrom = null;
      this.tooltip.hidden = true;
    });
  }

  render(): void {
    const ctx = this.ctx;
    if (!ctx) return; // headless: state-only mode
    ctx.clearRect(0, 0, this.width, this.height);
    ctx.fillStyle = "#10141c";
    ctx.fillRect(0, 0, this.width, this.height);
    for (const point of this.points) {
      const s = dataToScreen(this.viewTransform, point);
      if (s.x < -4 || s.y < -4 || s.x > this.width + 4 || s.y > this.height + 4) {
        continue;
      }
      const highlighted = this.highlighted.has(point.doc_id);
      const selected = this.selected === point.doc_id;
      const hovered = this.hovered === point.doc_id;
      ctx.beginPath();
      ctx.arc(s.x, s.y, selected ? 6 : highlighted ? 4.5 : 2.5, 0, Math.PI * 2);
      ctx.fillStyle = selected
        ? "#ffd166"
        : highlighted
          ? "#ef476f"
          : hovered
            ? "#8ecae6"
            : "#4a6fa5";
      ctx.fill();
      if (highlighted || selected) {
        ctx.strokeStyle = "#ffffff";
        ctx.lineWidth = 1;
        ctx.stroke();
      }
    }
  }
}
