/** Browser entry point: wires the view model to the DOM.
 *
 * All markup comes from the pure renderers; this file only installs delegated
 * event handlers, repaints the network canvas, and animates between served
 * layouts. Positions are never simulated on the client, only interpolated.
 */

import { ApiClient } from "./api.js";
import {
  drawNetwork,
  fitView,
  nodeAt,
  type DrawContext,
} from "./network.js";
import { renderApp } from "./render.js";
import { entityHash, parseHash } from "./router.js";
import { bucketSpan } from "./span.js";
import type { NetworkView } from "./types.js";
import { ViewModel, type AppState } from "./viewmodel.js";

const ANIMATION_MS = 300;

const api = new ApiClient((url) => fetch(url));
const vm = new ViewModel(api);
const root = document.getElementById("app") as HTMLElement;

let hoverId: string | null = null;
let paintedView: NetworkView | null = null;
let previousPositions = new Map<string, { x: number; y: number }>();
let animationStart = 0;
let animationHandle = 0;

function currentView(state: AppState): NetworkView | null {
  if (state.route.page !== "entity") return null;
  return state.entity?.network ?? null;
}

function findCanvas(): HTMLCanvasElement | null {
  return document.getElementById("network-canvas") as HTMLCanvasElement | null;
}

function tweenedView(view: NetworkView, t: number): NetworkView {
  if (t >= 1 || previousPositions.size === 0) return view;
  const ease = t * (2 - t);
  const nodes = view.nodes.map((node) => {
    const from = node.pos && previousPositions.get(node.id);
    if (!from || !node.pos) return node;
    return {
      ...node,
      pos: {
        x: from.x + (node.pos.x - from.x) * ease,
        y: from.y + (node.pos.y - from.y) * ease,
      },
    };
  });
  return { ...view, nodes };
}

function paintFrame(): void {
  const canvas = findCanvas();
  if (!canvas || !paintedView) return;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const t = Math.min(1, (performance.now() - animationStart) / ANIMATION_MS);
  const frame = tweenedView(paintedView, t);
  drawNetwork(ctx as unknown as DrawContext, frame, canvas.width, canvas.height, hoverId);
  if (t < 1) {
    animationHandle = requestAnimationFrame(paintFrame);
  } else {
    rememberPositions(paintedView);
  }
}

function rememberPositions(view: NetworkView): void {
  previousPositions = new Map();
  for (const node of view.nodes) {
    if (node.pos) previousPositions.set(node.id, node.pos);
  }
}

function repaintNetwork(state: AppState): void {
  const view = currentView(state);
  if (!view) {
    paintedView = null;
    previousPositions = new Map();
    return;
  }
  if (view !== paintedView) {
    paintedView = view;
    animationStart = performance.now();
    cancelAnimationFrame(animationHandle);
  }
  paintFrame();
}

function readSpanInputs(): { from: string | null; to: string | null } {
  const fromInput = document.getElementById("span-from") as HTMLInputElement | null;
  const toInput = document.getElementById("span-to") as HTMLInputElement | null;
  return {
    from: fromInput?.value ? fromInput.value : null,
    to: toInput?.value ? toInput.value : null,
  };
}

function handleCanvasClick(canvas: HTMLCanvasElement, event: MouseEvent): void {
  const view = currentView(vm.getState());
  if (!view) return;
  const rect = canvas.getBoundingClientRect();
  const viewport = fitView(view, canvas.width, canvas.height);
  const node = nodeAt(view, viewport, event.clientX - rect.left, event.clientY - rect.top);
  if (node) window.location.hash = entityHash(node.id);
}

function handleCanvasMove(canvas: HTMLCanvasElement, event: MouseEvent): void {
  const view = currentView(vm.getState());
  if (!view) return;
  const rect = canvas.getBoundingClientRect();
  const viewport = fitView(view, canvas.width, canvas.height);
  const node = nodeAt(view, viewport, event.clientX - rect.left, event.clientY - rect.top);
  const nextHover = node ? node.id : null;
  if (nextHover !== hoverId) {
    hoverId = nextHover;
    canvas.style.cursor = node ? "pointer" : "default";
    paintFrame();
  }
}

function performAction(action: string, element: HTMLElement): void {
  switch (action) {
    case "search": {
      const input = document.getElementById("search-input") as HTMLInputElement | null;
      void vm.search(input ? input.value.trim() : "");
      break;
    }
    case "apply-span": {
      const span = readSpanInputs();
      void vm.setSpan(span.from, span.to);
      break;
    }
    case "clear-span":
      void vm.setSpan(null, null);
      break;
    case "select-bucket": {
      const bucket = element.dataset.bucket;
      if (bucket) {
        const span = bucketSpan(bucket);
        void vm.setSpan(span.from, span.to);
      }
      break;
    }
    case "open-network":
      void vm.openNetwork();
      break;
    case "close-network":
      vm.closeNetwork();
      break;
    default:
      break;
  }
}

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement | null;
  if (!target) return;
  const canvas = target.closest("#network-canvas");
  if (canvas instanceof HTMLCanvasElement) {
    handleCanvasClick(canvas, event);
    return;
  }
  const actor = target.closest("[data-action]") as HTMLElement | null;
  if (!actor || !actor.dataset.action) return;
  event.preventDefault();
  performAction(actor.dataset.action, actor);
});

root.addEventListener("mousemove", (event) => {
  const target = event.target as HTMLElement | null;
  const canvas = target?.closest("#network-canvas");
  if (canvas instanceof HTMLCanvasElement) handleCanvasMove(canvas, event);
});

root.addEventListener("keydown", (event) => {
  const target = event.target as HTMLElement | null;
  if (event.key === "Enter" && target?.id === "search-input") {
    event.preventDefault();
    performAction("search", target);
  }
});

vm.subscribe((state) => {
  root.innerHTML = renderApp(state);
  repaintNetwork(state);
});

window.addEventListener("hashchange", () => {
  void vm.routeTo(parseHash(window.location.hash));
});

void vm.routeTo(parseHash(window.location.hash));
