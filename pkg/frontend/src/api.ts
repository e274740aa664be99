// Thin client over the stepping service; every method resolves to the
// server's JSON or rejects with {status, detail}.

import type {
  CreateResponse,
  EnabledJson,
  FireResponse,
  NetJson,
  StateJson,
} from "./types.js";

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = resp.status === 204 ? null : await resp.json().catch(() => null);
  if (!resp.ok) {
    throw { status: resp.status, detail: body?.detail ?? body };
  }
  return body as T;
}

export class StepperApi {
  constructor(private root: string = "") {}

  createSession(body: { source?: string; corpusId?: string }): Promise<CreateResponse> {
    return request(`${this.root}/sessions`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  state(sessionId: string): Promise<StateJson> {
    return request(`${this.root}/sessions/${sessionId}/state`);
  }

  enabled(sessionId: string): Promise<EnabledJson> {
    return request(`${this.root}/sessions/${sessionId}/enabled`);
  }

  fire(sessionId: string, modeIndex: number, stateVersion: number): Promise<FireResponse> {
    return request(`${this.root}/sessions/${sessionId}/fire`, {
      method: "POST",
      body: JSON.stringify({ modeIndex, stateVersion }),
    });
  }

  undo(sessionId: string): Promise<FireResponse> {
    return request(`${this.root}/sessions/${sessionId}/undo`, { method: "POST" });
  }

  reset(sessionId: string): Promise<FireResponse> {
    return request(`${this.root}/sessions/${sessionId}/reset`, { method: "POST" });
  }

  randomStep(sessionId: string, seed?: number): Promise<FireResponse> {
    return request(`${this.root}/sessions/${sessionId}/random-step`, {
      method: "POST",
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
  }

  net(sessionId: string): Promise<NetJson> {
    return request(`${this.root}/sessions/${sessionId}/net`);
  }
}
