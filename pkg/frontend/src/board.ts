// SVG board rendering.  Pure display of a BoardViewModel plus a layout:
// clicking is wired through callbacks, all legality comes from the model's
// server-provided legal move lists (illegal options are greyed out only).

import type { BoardViewModel } from './model.js';
import { colorName } from './model.js';
import type { LayoutNode } from './layout.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

const PALETTE = [
  '#f4f4f4', // uncolored
  '#2a9d8f', // 1 = TRUE
  '#e76f51', // 2 = FALSE
  '#8d99ae',
  '#e9c46a',
  '#90be6d',
  '#577590',
  '#f3722c',
  '#9b5de5',
  '#00b4d8',
  '#f15bb5',
  '#6a994e',
];

export interface BoardCallbacks {
  onVertexClick?: (vertex: number) => void;
  onClusterToggle?: (name: string) => void;
}

export function vertexFill(color: number | null): string {
  if (color === null) {
    return PALETTE[0];
  }
  return PALETTE[color % PALETTE.length];
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

export function renderBoard(
  svg: SVGSVGElement,
  model: BoardViewModel,
  layout: LayoutNode[],
  expandedClusters: Set<string>,
  callbacks: BoardCallbacks = {},
): void {
  svg.replaceChildren();
  const collapsed = new Map<string, { x: number; y: number }>();
  for (const cluster of model.clusters) {
    if (!expandedClusters.has(cluster.name)) {
      const xs = cluster.members.map((v) => layout[v].x);
      const ys = cluster.members.map((v) => layout[v].y);
      collapsed.set(cluster.name, {
        x: xs.reduce((a, b) => a + b, 0) / xs.length,
        y: ys.reduce((a, b) => a + b, 0) / ys.length,
      });
    }
  }
  const clusterOf = new Map<number, string>();
  for (const v of model.vertices) {
    if (v.cluster && collapsed.has(v.cluster)) {
      clusterOf.set(v.id, v.cluster);
    }
  }
  const seenClusterEdges = new Set<string>();
  for (const [u, v] of model.edges) {
    const cu = clusterOf.get(u);
    const cv = clusterOf.get(v);
    if (cu && cv && cu === cv) {
      continue; // edge inside a collapsed cluster
    }
    const a = cu ? collapsed.get(cu)! : layout[u];
    const b = cv ? collapsed.get(cv)! : layout[v];
    const key = `${cu ?? u}|${cv ?? v}`;
    if ((cu || cv) && seenClusterEdges.has(key)) {
      continue;
    }
    seenClusterEdges.add(key);
    svg.appendChild(
      el('line', {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        stroke: '#bbbbbb',
        'stroke-width': cu || cv ? '2' : '1',
        'stroke-dasharray': cu || cv ? '4 3' : '',
      }),
    );
  }
  for (const [name, pos] of collapsed) {
    const group = el('g', { cursor: 'pointer' });
    group.appendChild(
      el('rect', {
        x: String(pos.x - 26),
        y: String(pos.y - 16),
        width: '52',
        height: '32',
        rx: '8',
        fill: '#dee2e6',
        stroke: '#495057',
      }),
    );
    const label = el('text', {
      x: String(pos.x),
      y: String(pos.y + 5),
      'text-anchor': 'middle',
      'font-size': '14',
      'font-family': 'sans-serif',
    });
    const count = model.clusters.find((c) => c.name === name)?.members.length ?? 0;
    label.textContent = `${name} ×${count}`;
    group.appendChild(label);
    group.addEventListener('click', () => callbacks.onClusterToggle?.(name));
    svg.appendChild(group);
  }
  for (const v of model.vertices) {
    if (clusterOf.has(v.id)) {
      continue;
    }
    const pos = layout[v.id];
    const group = el('g', { cursor: 'pointer' });
    group.appendChild(
      el('circle', {
        cx: String(pos.x),
        cy: String(pos.y),
        r: v.pending ? '16' : '12',
        fill: vertexFill(v.color),
        stroke: v.pending ? '#d62828' : '#333333',
        'stroke-width': v.pending ? '3' : '1',
      }),
    );
    const label = el('text', {
      x: String(pos.x),
      y: String(pos.y - 18),
      'text-anchor': 'middle',
      'font-size': '11',
      'font-family': 'sans-serif',
      fill: '#555555',
    });
    label.textContent = v.badge ?? String(v.id);
    group.appendChild(label);
    if (v.color !== null) {
      const tag = el('text', {
        x: String(pos.x),
        y: String(pos.y + 4),
        'text-anchor': 'middle',
        'font-size': '9',
        'font-family': 'sans-serif',
      });
      tag.textContent = colorName(v.color);
      group.appendChild(tag);
    }
    group.addEventListener('click', () => callbacks.onVertexClick?.(v.id));
    svg.appendChild(group);
  }
}
