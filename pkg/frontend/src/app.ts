// Session controller: owns the current server state and drives the
// renderers. One mutating request in flight at a time; a 409 (stale
// mode list) refreshes the view and tells the user instead of failing.

import { StepperApi } from "./api.js";
import {
  clearNotice,
  renderModes,
  renderNet,
  renderPlaces,
  renderStatus,
  renderStore,
  showNotice,
} from "./render.js";
import type { ApiError, DiffJson, EnabledJson, ModeJson, StateJson } from "./types.js";

export interface AppElements {
  places: HTMLElement;
  store: HTMLElement;
  modes: HTMLElement;
  status: HTMLElement;
  notice: HTMLElement;
  diagram: HTMLElement;
}

export class StepperApp {
  sessionId: string | null = null;
  state: StateJson | null = null;
  private enabledList: EnabledJson | null = null;
  private busy = false;

  constructor(
    private api: StepperApi,
    private ui: AppElements,
  ) {}

  async start(body: { source?: string; corpusId?: string }): Promise<void> {
    const created = await this.api.createSession(body);
    this.sessionId = created.sessionId;
    this.applyState(created.state);
    await this.refreshModes();
    try {
      renderNet(this.ui.diagram, await this.api.net(created.sessionId));
    } catch {
      this.ui.diagram.replaceChildren();
    }
    clearNotice(this.ui.notice);
  }

  /** Paint a server state (and optional diff). The server is the only
   *  source of truth: nothing here recomputes markings client-side. */
  applyState(state: StateJson, diff?: DiffJson): void {
    this.state = state;
    renderPlaces(this.ui.places, state, diff);
    renderStore(this.ui.store, state, diff);
    renderStatus(this.ui.status, state);
  }

  async refreshModes(): Promise<void> {
    if (!this.sessionId) return;
    this.enabledList = await this.api.enabled(this.sessionId);
    renderModes(this.ui.modes, this.enabledList, (mode) => void this.fireMode(mode));
  }

  async fireMode(mode: ModeJson): Promise<void> {
    if (!this.sessionId || !this.enabledList || this.busy) return;
    this.busy = true;
    try {
      const resp = await this.api.fire(
        this.sessionId,
        mode.modeIndex,
        this.enabledList.stateVersion,
      );
      this.applyState(resp.state, resp.diff);
      await this.refreshModes();
      clearNotice(this.ui.notice);
    } catch (err) {
      await this.recover(err as ApiError, "that mode list was stale; refreshed");
    } finally {
      this.busy = false;
    }
  }

  async undo(): Promise<void> {
    await this.mutate(() => this.api.undo(this.sessionId!), "nothing to undo");
  }

  async reset(): Promise<void> {
    await this.mutate(() => this.api.reset(this.sessionId!), "reset failed");
  }

  async randomStep(seed?: number): Promise<void> {
    await this.mutate(() => this.api.randomStep(this.sessionId!, seed), "state is terminal");
  }

  private async mutate(
    call: () => Promise<{ state: StateJson; diff: DiffJson }>,
    conflictMessage: string,
  ): Promise<void> {
    if (!this.sessionId || this.busy) return;
    this.busy = true;
    try {
      const resp = await call();
      this.applyState(resp.state, resp.diff);
      await this.refreshModes();
      clearNotice(this.ui.notice);
    } catch (err) {
      await this.recover(err as ApiError, conflictMessage);
    } finally {
      this.busy = false;
    }
  }

  private async recover(err: ApiError, conflictMessage: string): Promise<void> {
    if (err && err.status === 409) {
      showNotice(this.ui.notice, "stale", conflictMessage);
      if (this.sessionId) {
        this.applyState(await this.api.state(this.sessionId));
        await this.refreshModes();
      }
      return;
    }
    const detail = typeof err?.detail === "string" ? err.detail : "request failed";
    showNotice(this.ui.notice, "error", `${detail} (you can retry)`);
  }
}
