// Wire types for the game service JSON API.  The client renders exactly
// these payloads; every game-legality decision stays on the server.

export type Role = 'painter' | 'drawer';
export type Opponent = 'solver' | 'script' | 'random';

export type GameStatus =
  | 'ongoing-drawer-to-move'
  | 'ongoing-painter-to-move'
  | 'painter-won'
  | 'drawer-won';

export interface StatePayload {
  vertices: number;
  edges: number[][];
  colors: Record<string, number>;
  pending: number | null;
  status: GameStatus;
}

export interface LegalMoves {
  colors?: number[];
  neighborhoods?: number[][];
}

export interface MoveLogEntry {
  role: Role;
  color?: number;
  neighborhood?: number[];
  by: 'human' | 'engine';
}

export interface SessionPayload {
  id: string;
  k: number;
  host_vertex_count: number;
  human_role: Role;
  opponent: Opponent;
  state: StatePayload;
  to_move: Role | null;
  legal_moves: LegalMoves | null;
  move_log: MoveLogEntry[];
  badges: string[] | null;
}

export interface CreateSessionRequest {
  graph?: string;
  formula?: string;
  k?: number;
  human_role: Role;
  opponent: Opponent;
  seed?: number;
}

export interface MoveRequest {
  color?: number;
  neighborhood?: number[];
}

export interface HintResponse {
  move: { color?: number; neighborhood?: number[] };
  source: 'solver' | 'script';
}

export interface IllegalMoveDetail {
  error: string;
  legal_moves: LegalMoves;
}
