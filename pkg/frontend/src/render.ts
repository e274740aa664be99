// DOM builders. Every renderer paints exactly what the server said:
// no client-side state math, so the view can never drift from the
// engine. Deltas are highlighted from the server's diff field.

import type { DiffJson, EnabledJson, ModeJson, NetJson, StateJson } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderPlaces(
  container: HTMLElement,
  state: StateJson,
  diff?: DiffJson,
): void {
  container.replaceChildren();
  for (const [place, tokens] of Object.entries(state.places)) {
    const panel = el("div", "place-panel");
    const heading = el("h3", "place-name", place);
    const total = tokens.reduce((n, t) => n + t.count, 0);
    heading.append(el("span", "badge", String(total)));
    panel.append(heading);
    const chipRow = el("div", "chips");
    const added = new Set(diff?.places[place]?.added ?? []);
    for (const token of tokens) {
      for (let i = 0; i < token.count; i++) {
        const chip = el("span", "chip", token.text);
        if (added.has(token.text)) chip.classList.add("fresh");
        chipRow.append(chip);
      }
    }
    if (tokens.length === 0) chipRow.append(el("span", "empty", "empty"));
    const removed = diff?.places[place]?.removed ?? [];
    for (const text of removed) {
      const ghost = el("span", "chip gone", text);
      chipRow.append(ghost);
    }
    panel.append(chipRow);
    container.append(panel);
  }
}

export function renderStore(
  container: HTMLElement,
  state: StateJson,
  diff?: DiffJson,
): void {
  container.replaceChildren();
  const names = Object.keys(state.store);
  if (names.length === 0) {
    container.append(el("p", "empty", "no global data"));
    return;
  }
  for (const name of names) {
    const row = el("div", "store-row");
    row.append(el("span", "pointer-name", name));
    const valueNode = el("span", "pointer-value", state.store[name].text);
    if (diff?.store[name]) valueNode.classList.add("fresh");
    row.append(valueNode);
    container.append(row);
  }
}

export function renderModes(
  container: HTMLElement,
  enabled: EnabledJson,
  onFire: (mode: ModeJson) => void,
): void {
  container.replaceChildren();
  if (enabled.modes.length === 0) {
    container.append(el("p", "empty", "no enabled mode"));
    return;
  }
  // server order is the canonical order; indices must line up
  for (const mode of enabled.modes) {
    const button = el("button", "mode");
    button.dataset.modeIndex = String(mode.modeIndex);
    button.append(el("span", "mode-transition", mode.transition));
    const bindingText = Object.entries(mode.binding)
      .map(([name, entry]) => `${name}=${entry.text}`)
      .join("  ");
    if (bindingText) button.append(el("span", "mode-binding", bindingText));
    button.addEventListener("click", () => onFire(mode));
    container.append(button);
  }
}

export function renderStatus(
  container: HTMLElement,
  state: StateJson,
): void {
  container.replaceChildren();
  container.append(el("span", "version", `state v${state.version}`));
  container.append(el("span", "history", `step ${state.historyLength - 1}`));
  if (state.terminal) container.append(el("span", "terminal-badge", "terminal"));
}

export function showNotice(container: HTMLElement, kind: string, message: string): void {
  container.replaceChildren(el("div", `notice ${kind}`, message));
}

export function clearNotice(container: HTMLElement): void {
  container.replaceChildren();
}

// ------------------------------------------------------------- diagram

interface LaidOut {
  x: number;
  y: number;
  kind: "place" | "transition";
  name: string;
}

function layerNodes(net: NetJson): Map<string, number> {
  const succ = new Map<string, string[]>();
  const indeg = new Map<string, number>();
  const nodes = [...net.places, ...net.transitions];
  for (const n of nodes) {
    succ.set(n, []);
    indeg.set(n, 0);
  }
  for (const arc of net.arcs) {
    succ.get(arc.from)?.push(arc.to);
    indeg.set(arc.to, (indeg.get(arc.to) ?? 0) + 1);
  }
  const layer = new Map<string, number>();
  const queue: string[] = nodes.filter((n) => (indeg.get(n) ?? 0) === 0);
  for (const n of queue) layer.set(n, 0);
  if (queue.length === 0 && nodes.length > 0) {
    queue.push(nodes[0]);
    layer.set(nodes[0], 0);
  }
  let guard = nodes.length * nodes.length + 1;
  while (queue.length > 0 && guard-- > 0) {
    const n = queue.shift()!;
    for (const next of succ.get(n) ?? []) {
      const candidate = (layer.get(n) ?? 0) + 1;
      if (!layer.has(next)) {
        layer.set(next, candidate);
        queue.push(next);
      }
    }
  }
  for (const n of nodes) if (!layer.has(n)) layer.set(n, 0);
  return layer;
}

export function renderNet(container: HTMLElement, net: NetJson): void {
  const layer = layerNodes(net);
  const byLayer = new Map<number, string[]>();
  for (const [node, l] of layer) {
    if (!byLayer.has(l)) byLayer.set(l, []);
    byLayer.get(l)!.push(node);
  }
  const placed = new Map<string, LaidOut>();
  const colWidth = 170;
  const rowHeight = 64;
  let maxRows = 1;
  for (const [l, members] of [...byLayer.entries()].sort((a, b) => a[0] - b[0])) {
    members.sort();
    members.forEach((name, i) => {
      placed.set(name, {
        x: 40 + l * colWidth,
        y: 40 + i * rowHeight,
        kind: net.places.includes(name) ? "place" : "transition",
        name,
      });
    });
    maxRows = Math.max(maxRows, members.length);
  }
  const width = 80 + colWidth * byLayer.size;
  const height = 60 + rowHeight * maxRows;

  const SVG = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(SVG, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "net-diagram");

  const defs = document.createElementNS(SVG, "defs");
  defs.innerHTML =
    '<marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="3" orient="auto">' +
    '<path d="M0,0 L7,3 L0,6 z"/></marker>';
  svg.append(defs);

  for (const arc of net.arcs) {
    const a = placed.get(arc.from);
    const b = placed.get(arc.to);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", "arc");
    line.setAttribute("marker-end", "url(#arrow)");
    svg.append(line);
  }

  for (const node of placed.values()) {
    const group = document.createElementNS(SVG, "g");
    if (node.kind === "place") {
      const circle = document.createElementNS(SVG, "circle");
      circle.setAttribute("cx", String(node.x));
      circle.setAttribute("cy", String(node.y));
      circle.setAttribute("r", "14");
      circle.setAttribute("class", "node place");
      group.append(circle);
    } else {
      const rect = document.createElementNS(SVG, "rect");
      rect.setAttribute("x", String(node.x - 16));
      rect.setAttribute("y", String(node.y - 12));
      rect.setAttribute("width", "32");
      rect.setAttribute("height", "24");
      rect.setAttribute("class", "node transition");
      group.append(rect);
    }
    const label = document.createElementNS(SVG, "text");
    label.setAttribute("x", String(node.x));
    label.setAttribute("y", String(node.y + 28));
    label.setAttribute("class", "node-label");
    label.textContent = node.name;
    group.append(label);
    svg.append(group);
  }
  container.replaceChildren(svg);
}
