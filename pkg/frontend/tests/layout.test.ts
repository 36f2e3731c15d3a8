import { describe, expect, it } from 'vitest';

import { DEFAULT_OPTIONS, initialNodes, runLayout, step } from '../src/layout.js';

const P4_EDGES: [number, number][] = [
  [0, 1],
  [1, 2],
  [2, 3],
];

describe('force layout', () => {
  it('is deterministic', () => {
    const a = runLayout(4, P4_EDGES);
    const b = runLayout(4, P4_EDGES);
    expect(a).toStrictEqual(b);
  });

  it('keeps every vertex inside the viewport', () => {
    const nodes = runLayout(8, [[0, 1], [2, 3], [4, 5], [6, 7]]);
    for (const node of nodes) {
      expect(node.x).toBeGreaterThanOrEqual(20);
      expect(node.x).toBeLessThanOrEqual(DEFAULT_OPTIONS.width - 20);
      expect(node.y).toBeGreaterThanOrEqual(20);
      expect(node.y).toBeLessThanOrEqual(DEFAULT_OPTIONS.height - 20);
    }
  });

  it('pins rail vertices in place', () => {
    const nodes = runLayout(6, P4_EDGES, [4, 5]);
    const before = initialNodes(6, [4, 5]);
    expect(nodes[4]).toStrictEqual(before[4]);
    expect(nodes[5]).toStrictEqual(before[5]);
  });

  it('pulls adjacent vertices closer than the spring rest length bound', () => {
    let nodes = initialNodes(2, []);
    for (let i = 0; i < 400; i += 1) {
      nodes = step(nodes, [[0, 1]]);
    }
    const d = Math.hypot(nodes[0].x - nodes[1].x, nodes[0].y - nodes[1].y);
    expect(d).toBeLessThan(DEFAULT_OPTIONS.springLength * 2.5);
  });

  it('separates non-adjacent vertices', () => {
    const nodes = runLayout(3, [[0, 1]]);
    const d = Math.hypot(nodes[0].x - nodes[2].x, nodes[0].y - nodes[2].y);
    expect(d).toBeGreaterThan(30);
  });
});
