/** Visual mapping and geometry for the co-occurrence network panel.
 *
 * Everything here is pure: sizes, colors, and projected coordinates are
 * computed from the served view, and drawing goes through a narrow canvas
 * interface so tests can record the calls instead of rasterizing.
 */

import type { NetworkEdge, NetworkNode, NetworkView } from "./types.js";

export const PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#e15759",
  "#76b7b2",
  "#59a14f",
  "#edc948",
  "#b07aa1",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
  "#1170aa",
  "#a3cce9",
] as const;

export const NEUTRAL_COLOR = "#8a8a8a";

export const RADIUS = { rMin: 4, c: 14 } as const;
export const EDGE_WIDTH = { min: 0.5, range: 2.5 } as const;

/** 32-bit FNV-1a hash, stable across sessions so colors never shuffle. */
export function hashKey(key: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < key.length; i++) {
    h ^= key.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

export function colorFor(colorKey: string): string {
  if (!colorKey) return NEUTRAL_COLOR;
  return PALETTE[hashKey(colorKey) % PALETTE.length]!;
}

/** Node radius: r_min + c * sqrt(weight / max weight in view). */
export function nodeRadius(weight: number, maxWeight: number): number {
  if (maxWeight <= 0) return RADIUS.rMin;
  return RADIUS.rMin + RADIUS.c * Math.sqrt(weight / maxWeight);
}

/** Edge stroke width, linear in weight relative to the view maximum. */
export function edgeWidth(weight: number, maxWeight: number): number {
  if (maxWeight <= 0) return EDGE_WIDTH.min;
  return EDGE_WIDTH.min + EDGE_WIDTH.range * (weight / maxWeight);
}

export function maxNodeWeight(view: NetworkView): number {
  return view.nodes.reduce((m, n) => Math.max(m, n.weight), 0);
}

export function maxEdgeWeight(view: NetworkView): number {
  return view.edges.reduce((m, e) => Math.max(m, e.weight), 0);
}

/** Distinct non-empty color keys present in the view, sorted. */
export function legendKeys(view: NetworkView): string[] {
  const keys = new Set<string>();
  for (const node of view.nodes) {
    if (node.color_key) keys.add(node.color_key);
  }
  return [...keys].sort();
}

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
}

const FIT_MARGIN = 30;

/** Scale-and-translate transform that centers the layout in a w x h canvas. */
export function fitView(view: NetworkView, width: number, height: number): Viewport {
  const placed = view.nodes.filter((n) => n.pos);
  if (placed.length === 0) {
    return { scale: 1, offsetX: width / 2, offsetY: height / 2 };
  }
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const node of placed) {
    minX = Math.min(minX, node.pos!.x);
    maxX = Math.max(maxX, node.pos!.x);
    minY = Math.min(minY, node.pos!.y);
    maxY = Math.max(maxY, node.pos!.y);
  }
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min(
    (width - 2 * FIT_MARGIN) / spanX,
    (height - 2 * FIT_MARGIN) / spanY,
  );
  const centerX = (minX + maxX) / 2;
  const centerY = (minY + maxY) / 2;
  return {
    scale,
    offsetX: width / 2 - centerX * scale,
    offsetY: height / 2 - centerY * scale,
  };
}

export function project(pos: { x: number; y: number }, vp: Viewport): { x: number; y: number } {
  return { x: pos.x * vp.scale + vp.offsetX, y: pos.y * vp.scale + vp.offsetY };
}

/** Topmost node whose drawn circle contains the canvas point, if any. */
export function nodeAt(
  view: NetworkView,
  vp: Viewport,
  x: number,
  y: number,
): NetworkNode | null {
  const wmax = maxNodeWeight(view);
  // Later nodes draw on top, so scan in reverse.
  for (let i = view.nodes.length - 1; i >= 0; i--) {
    const node = view.nodes[i]!;
    if (!node.pos) continue;
    const p = project(node.pos, vp);
    const r = nodeRadius(node.weight, wmax);
    if ((x - p.x) ** 2 + (y - p.y) ** 2 <= r * r) return node;
  }
  return null;
}

export function incidentEdges(view: NetworkView, nodeId: string): NetworkEdge[] {
  return view.edges.filter((e) => e.a === nodeId || e.b === nodeId);
}

/** The subset of the canvas 2D context the renderer actually uses. */
export interface DrawContext {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

/** Paint the network. Pure: same view, size, and hover give the same calls. */
export function drawNetwork(
  ctx: DrawContext,
  view: NetworkView,
  width: number,
  height: number,
  hoverId: string | null = null,
): void {
  ctx.clearRect(0, 0, width, height);
  if (view.nodes.length === 0) return;

  const vp = fitView(view, width, height);
  const wmax = maxNodeWeight(view);
  const emax = maxEdgeWeight(view);
  const points = new Map<string, { x: number; y: number }>();
  for (const node of view.nodes) {
    if (node.pos) points.set(node.id, project(node.pos, vp));
  }

  for (const edge of view.edges) {
    const pa = points.get(edge.a);
    const pb = points.get(edge.b);
    if (!pa || !pb) continue;
    const highlighted =
      hoverId !== null && (edge.a === hoverId || edge.b === hoverId);
    ctx.globalAlpha = hoverId === null || highlighted ? 1 : 0.15;
    ctx.strokeStyle = highlighted ? "#333333" : "#c8c8c8";
    ctx.lineWidth = edgeWidth(edge.weight, emax);
    ctx.beginPath();
    ctx.moveTo(pa.x, pa.y);
    ctx.lineTo(pb.x, pb.y);
    ctx.stroke();
  }

  ctx.globalAlpha = 1;
  for (const node of view.nodes) {
    const p = points.get(node.id);
    if (!p) continue;
    const r = nodeRadius(node.weight, wmax);
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
    ctx.fillStyle = colorFor(node.color_key);
    ctx.fill();
    if (node.id === hoverId) {
      ctx.strokeStyle = "#222222";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }

  ctx.fillStyle = "#222222";
  ctx.font = "12px sans-serif";
  ctx.textAlign = "center";
  for (const node of view.nodes) {
    const p = points.get(node.id);
    if (!p) continue;
    const r = nodeRadius(node.weight, wmax);
    ctx.fillText(node.label, p.x, p.y - r - 4);
  }
}
