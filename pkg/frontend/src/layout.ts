// A small deterministic force layout: spring forces along edges, inverse
// square repulsion between vertices, clustered vertices pinned to a rail on
// the left.  Pure functions over plain data so it can be unit tested.

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
  pinned: boolean;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations: number;
  springLength: number;
  springStrength: number;
  repulsion: number;
}

export const DEFAULT_OPTIONS: LayoutOptions = {
  width: 720,
  height: 520,
  iterations: 220,
  springLength: 90,
  springStrength: 0.02,
  repulsion: 18000,
};

// deterministic pseudo-random placement so layouts are reproducible
function seededPosition(id: number, width: number, height: number) {
  const golden = 0.6180339887498949;
  const a = (id * golden) % 1;
  const b = (id * golden * golden) % 1;
  return {
    x: width * (0.2 + 0.6 * a),
    y: height * (0.2 + 0.6 * b),
  };
}

export function initialNodes(
  count: number,
  pinnedRail: number[],
  options: LayoutOptions = DEFAULT_OPTIONS,
): LayoutNode[] {
  const pinned = new Set(pinnedRail);
  const nodes: LayoutNode[] = [];
  let railIndex = 0;
  for (let id = 0; id < count; id += 1) {
    if (pinned.has(id)) {
      nodes.push({
        id,
        x: 40,
        y: 40 + (railIndex * (options.height - 80)) / Math.max(1, pinnedRail.length - 1),
        pinned: true,
      });
      railIndex += 1;
    } else {
      const { x, y } = seededPosition(id, options.width, options.height);
      nodes.push({ id, x, y, pinned: false });
    }
  }
  return nodes;
}

export function step(
  nodes: LayoutNode[],
  edges: [number, number][],
  options: LayoutOptions = DEFAULT_OPTIONS,
): LayoutNode[] {
  const fx = new Array(nodes.length).fill(0);
  const fy = new Array(nodes.length).fill(0);
  for (let i = 0; i < nodes.length; i += 1) {
    for (let j = i + 1; j < nodes.length; j += 1) {
      const dx = nodes[j].x - nodes[i].x;
      const dy = nodes[j].y - nodes[i].y;
      const d2 = Math.max(25, dx * dx + dy * dy);
      const f = options.repulsion / d2;
      const d = Math.sqrt(d2);
      fx[i] -= (f * dx) / d;
      fy[i] -= (f * dy) / d;
      fx[j] += (f * dx) / d;
      fy[j] += (f * dy) / d;
    }
  }
  for (const [u, v] of edges) {
    const dx = nodes[v].x - nodes[u].x;
    const dy = nodes[v].y - nodes[u].y;
    const d = Math.max(5, Math.sqrt(dx * dx + dy * dy));
    const f = options.springStrength * (d - options.springLength);
    fx[u] += (f * dx) / d;
    fy[u] += (f * dy) / d;
    fx[v] -= (f * dx) / d;
    fy[v] -= (f * dy) / d;
  }
  return nodes.map((node, i) => {
    if (node.pinned) {
      return node;
    }
    const x = Math.min(
      options.width - 20,
      Math.max(20, node.x + Math.max(-12, Math.min(12, fx[i]))),
    );
    const y = Math.min(
      options.height - 20,
      Math.max(20, node.y + Math.max(-12, Math.min(12, fy[i]))),
    );
    return { ...node, x, y };
  });
}

export function runLayout(
  count: number,
  edges: [number, number][],
  pinnedRail: number[] = [],
  options: LayoutOptions = DEFAULT_OPTIONS,
): LayoutNode[] {
  let nodes = initialNodes(count, pinnedRail, options);
  for (let i = 0; i < options.iterations; i += 1) {
    nodes = step(nodes, edges, options);
  }
  return nodes;
}
