// Thin HTTP client over the nav-service endpoints.

import type { ParseView, Snapshot, StaticMap } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(base + path, {
    headers: { 'content-type': 'application/json' },
    ...init,
  });
  const body = await resp.text();
  if (!resp.ok) {
    let detail = body;
    try {
      detail = JSON.parse(body).detail ?? body;
    } catch {
      /* plain-text error */
    }
    throw new ApiError(resp.status, detail);
  }
  return JSON.parse(body) as T;
}

export class NavClient {
  constructor(public base: string = '') {}

  listAssets(): Promise<{ maps: string[]; models: string[] }> {
    return request(this.base, '/assets');
  }

  async createSession(
    map: string,
    model: string,
    seed: number,
    config: Record<string, unknown> = {},
  ): Promise<string> {
    const out = await request<{ session_id: string }>(this.base, '/sessions', {
      method: 'POST',
      body: JSON.stringify({ map, model, seed, config }),
    });
    return out.session_id;
  }

  sendInstruction(sessionId: string, text: string): Promise<ParseView> {
    return request(this.base, `/sessions/${sessionId}/instruction`, {
      method: 'POST',
      body: JSON.stringify({ text }),
    });
  }

  tick(sessionId: string, n: number): Promise<{ tick: number; status: string }> {
    return request(this.base, `/sessions/${sessionId}/tick`, {
      method: 'POST',
      body: JSON.stringify({ n }),
    });
  }

  setMode(
    sessionId: string,
    mode: 'paused' | 'stepping' | 'realtime',
    rateHz?: number,
  ): Promise<{ mode: string; rate_hz: number }> {
    return request(this.base, `/sessions/${sessionId}/mode`, {
      method: 'POST',
      body: JSON.stringify({ mode, rate_hz: rateHz ?? null }),
    });
  }

  getSnapshot(sessionId: string): Promise<Snapshot> {
    return request(this.base, `/sessions/${sessionId}/snapshot`);
  }

  getMap(sessionId: string): Promise<StaticMap> {
    return request(this.base, `/sessions/${sessionId}/map`);
  }
}
