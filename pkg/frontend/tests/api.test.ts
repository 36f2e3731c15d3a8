import { describe, expect, it } from 'vitest';

import { ApiError, GameClient, IllegalMoveError, type FetchLike } from '../src/api.js';

function fakeFetch(
  handler: (input: string, init?: Parameters<FetchLike>[1]) => { status: number; body: unknown },
): FetchLike {
  return async (input, init) => {
    const { status, body } = handler(input, init);
    return { status, json: async () => body };
  };
}

describe('GameClient', () => {
  it('creates sessions with one POST', async () => {
    const calls: string[] = [];
    const client = new GameClient(
      'http://x',
      fakeFetch((input, init) => {
        calls.push(`${init?.method} ${input}`);
        return { status: 201, body: { id: 'abc' } };
      }),
    );
    const payload = await client.createSession({
      graph: 'p 1 0\n',
      k: 1,
      human_role: 'painter',
      opponent: 'random',
    });
    expect(payload.id).toBe('abc');
    expect(calls).toStrictEqual(['POST http://x/sessions']);
  });

  it('raises IllegalMoveError with the legal-move list on 409', async () => {
    const client = new GameClient(
      '',
      fakeFetch(() => ({
        status: 409,
        body: {
          detail: { error: 'color 9 is not legal', legal_moves: { colors: [1, 2] } },
        },
      })),
    );
    await expect(client.move('abc', { color: 9 })).rejects.toMatchObject({
      info: { legal_moves: { colors: [1, 2] } },
    });
    try {
      await client.move('abc', { color: 9 });
    } catch (err) {
      expect(err).toBeInstanceOf(IllegalMoveError);
    }
  });

  it('raises plain ApiError otherwise', async () => {
    const client = new GameClient(
      '',
      fakeFetch(() => ({ status: 404, body: { detail: 'unknown session' } })),
    );
    await expect(client.getSession('zzz')).rejects.toBeInstanceOf(ApiError);
  });

  it('maps hint and delete endpoints', async () => {
    const calls: string[] = [];
    const client = new GameClient(
      '',
      fakeFetch((input, init) => {
        calls.push(`${init?.method} ${input}`);
        if (init?.method === 'DELETE') {
          return { status: 204, body: null };
        }
        return { status: 200, body: { move: { color: 2 }, source: 'solver' } };
      }),
    );
    const hint = await client.hint('abc');
    expect(hint.move.color).toBe(2);
    await client.deleteSession('abc');
    expect(calls).toStrictEqual(['GET /sessions/abc/hint', 'DELETE /sessions/abc']);
  });
});
