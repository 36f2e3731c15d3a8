// View model derivation.  The board renders exactly the session payload:
// no game logic happens here beyond reshaping fields for display, so a
// field-for-field comparison against the server payload must round-trip.

import type { LegalMoves, Role, SessionPayload } from './types.js';

export interface VertexView {
  id: number;
  color: number | null;
  pending: boolean;
  badge: string | null;
  cluster: string | null; // pre-colored role clusters collapse to one badge
}

export interface BoardViewModel {
  sessionId: string;
  k: number;
  hostVertexCount: number;
  humanRole: Role;
  vertices: VertexView[];
  edges: [number, number][];
  status: string;
  statusBanner: string;
  toMove: Role | null;
  humanTurn: boolean;
  legalColors: number[];
  legalNeighborhoods: number[][];
  history: string[];
  clusters: { name: string; members: number[] }[];
}

// Pre-colored blocks render collapsed: dozens of identical vertices would
// swamp the board, and the human's decisions only concern what comes later.
const CLUSTERED_BADGES = new Set(['A', 'B']);

export function colorName(color: number): string {
  if (color === 1) return 'TRUE';
  if (color === 2) return 'FALSE';
  return `c${color}`;
}

export function statusBanner(payload: SessionPayload): string {
  switch (payload.state.status) {
    case 'painter-won':
      return 'Painter wins: the whole graph is colored.';
    case 'drawer-won':
      return 'Drawer wins: the pending vertex has no legal color.';
    case 'ongoing-painter-to-move':
      return payload.human_role === 'painter'
        ? 'Your move: pick a color for the highlighted vertex.'
        : 'Waiting for the painter.';
    default:
      return payload.human_role === 'drawer'
        ? 'Your move: pick the new vertex’s neighborhood.'
        : 'Waiting for the drawer.';
  }
}

export function describeMove(entry: SessionPayload['move_log'][number]): string {
  const actor = entry.by === 'human' ? 'you' : 'engine';
  if (entry.role === 'drawer') {
    const nb = entry.neighborhood ?? [];
    return nb.length
      ? `${actor}: present vertex adjacent to ${nb.join(', ')}`
      : `${actor}: present an isolated vertex`;
  }
  return `${actor}: color ${colorName(entry.color ?? 0)}`;
}

export function renderModel(payload: SessionPayload): BoardViewModel {
  const legal: LegalMoves = payload.legal_moves ?? {};
  const badges = payload.badges;
  const vertices: VertexView[] = [];
  for (let v = 0; v < payload.state.vertices; v += 1) {
    const badge = badges ? badges[v] : null;
    vertices.push({
      id: v,
      color: payload.state.colors[String(v)] ?? null,
      pending: payload.state.pending === v,
      badge,
      cluster: badge !== null && CLUSTERED_BADGES.has(badge) ? badge : null,
    });
  }
  const clusters: { name: string; members: number[] }[] = [];
  for (const name of CLUSTERED_BADGES) {
    const members = vertices.filter((v) => v.cluster === name).map((v) => v.id);
    if (members.length) {
      clusters.push({ name, members });
    }
  }
  return {
    sessionId: payload.id,
    k: payload.k,
    hostVertexCount: payload.host_vertex_count,
    humanRole: payload.human_role,
    vertices,
    edges: payload.state.edges.map(([u, v]) => [u, v] as [number, number]),
    status: payload.state.status,
    statusBanner: statusBanner(payload),
    toMove: payload.to_move,
    humanTurn: payload.to_move !== null && payload.to_move === payload.human_role,
    legalColors: legal.colors ?? [],
    legalNeighborhoods: legal.neighborhoods ?? [],
    history: payload.move_log.map(describeMove),
    clusters,
  };
}

// Round-trip projection used by the fidelity test: a rendered model maps
// back onto the payload fields it came from.
export function modelToStateFields(model: BoardViewModel) {
  const colors: Record<string, number> = {};
  for (const v of model.vertices) {
    if (v.color !== null) {
      colors[String(v.id)] = v.color;
    }
  }
  const pendingVertex = model.vertices.find((v) => v.pending);
  return {
    vertices: model.vertices.length,
    edges: model.edges.map(([u, v]) => [u, v]),
    colors,
    pending: pendingVertex ? pendingVertex.id : null,
    status: model.status,
  };
}
