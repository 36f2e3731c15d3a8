// Thin typed client over the session endpoints.  The fetch function is
// injected so tests can drive the client against recorded payloads.

import type {
  CreateSessionRequest,
  HintResponse,
  IllegalMoveDetail,
  MoveRequest,
  SessionPayload,
} from './types.js';

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`service responded ${status}`);
  }
}

export class IllegalMoveError extends ApiError {
  constructor(
    status: number,
    readonly info: IllegalMoveDetail,
  ) {
    super(status, info);
  }
}

export class GameClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (resp.status === 204) {
      return undefined as T;
    }
    const payload = (await resp.json()) as { detail?: unknown } & T;
    if (resp.status >= 400) {
      const detail = payload?.detail;
      if (
        resp.status === 409 &&
        detail !== null &&
        typeof detail === 'object' &&
        'legal_moves' in (detail as object)
      ) {
        throw new IllegalMoveError(resp.status, detail as IllegalMoveDetail);
      }
      throw new ApiError(resp.status, detail);
    }
    return payload;
  }

  createSession(req: CreateSessionRequest): Promise<SessionPayload> {
    return this.request('POST', '/sessions', req);
  }

  getSession(id: string): Promise<SessionPayload> {
    return this.request('GET', `/sessions/${id}`);
  }

  move(id: string, move: MoveRequest): Promise<SessionPayload> {
    return this.request('POST', `/sessions/${id}/moves`, move);
  }

  hint(id: string): Promise<HintResponse> {
    return this.request('GET', `/sessions/${id}/hint`);
  }

  deleteSession(id: string): Promise<void> {
    return this.request('DELETE', `/sessions/${id}`);
  }
}
