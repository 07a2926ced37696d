/** Viewport transform math for the semantic viewer.
 *
 * screen = data * scale + translation, uniformly in x and y. The
 * transform is always invertible (scale clamped above zero), so
 * screen -> data -> screen round-trips are exact up to float error.
 */

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export interface XY {
  x: number;
  y: number;
}

const MIN_SCALE = 1e-9;

export function dataToScreen(t: Transform, p: XY): XY {
  return { x: p.x * t.scale + t.tx, y: p.y * t.scale + t.ty };
}

export function screenToData(t: Transform, p: XY): XY {
  return { x: (p.x - t.tx) / t.scale, y: (p.y - t.ty) / t.scale };
}

export function pan(t: Transform, dx: number, dy: number): Transform {
  return { scale: t.scale, tx: t.tx + dx, ty: t.ty + dy };
}

/** Zoom by `factor` keeping the screen point (sx, sy) fixed. */
export function zoomAt(t: Transform, sx: number, sy: number, factor: number): Transform {
  const scale = Math.max(t.scale * factor, MIN_SCALE);
  const applied = scale / t.scale;
  return {
    scale,
    tx: sx - (sx - t.tx) * applied,
    ty: sy - (sy - t.ty) * applied,
  };
}

/** Initial transform fitting all points into width x height with padding. */
export function fitBounds(
  points: XY[],
  width: number,
  height: number,
  padding = 30,
): Transform {
  if (points.length === 0) return { scale: 1, tx: width / 2, ty: height / 2 };
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.x);
    maxX = Math.max(maxX, p.x);
    minY = Math.min(minY, p.y);
    maxY = Math.max(maxY, p.y);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min(
    (width - 2 * padding) / spanX,
    (height - 2 * padding) / spanY,
  );
  const centerX = (minX + maxX) / 2;
  const centerY = (minY + maxY) / 2;
  return {
    scale,
    tx: width / 2 - centerX * scale,
    ty: height / 2 - centerY * scale,
  };
}

/** Index of the nearest point within maxRadius screen pixels, or -1. */
export function nearestPointIndex(
  points: XY[],
  t: Transform,
  sx: number,
  sy: number,
  maxRadius: number,
): number {
  let best = -1;
  let bestDist = maxRadius;
  for (let i = 0; i < points.length; i++) {
    const s = dataToScreen(t, points[i]);
    const dist = Math.hypot(s.x - sx, s.y - sy);
    if (dist <= bestDist) {
      bestDist = dist;
      best = i;
    }
  }
  return best;
}
