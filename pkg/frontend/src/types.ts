// Payload shapes of the stepping service JSON API.

export interface TokenEntry {
  value: unknown;
  text: string;
  count: number;
}

export interface StoreEntry {
  value: unknown;
  text: string;
}

export interface StateJson {
  version: number;
  places: Record<string, TokenEntry[]>;
  store: Record<string, StoreEntry>;
  terminal: boolean;
  canUndo: boolean;
  historyLength: number;
}

export interface BindingEntry {
  value: unknown;
  text: string;
}

export interface ModeJson {
  modeIndex: number;
  transition: string;
  binding: Record<string, BindingEntry>;
}

export interface EnabledJson {
  stateVersion: number;
  modes: ModeJson[];
}

export interface PlaceDiff {
  added: string[];
  removed: string[];
}

export interface DiffJson {
  places: Record<string, PlaceDiff>;
  store: Record<string, { before: string | null; after: string | null }>;
}

export interface FireResponse {
  fired?: ModeJson;
  state: StateJson;
  diff: DiffJson;
}

export interface CreateResponse {
  sessionId: string;
  state: StateJson;
}

export interface NetArc {
  from: string;
  to: string;
  tokens: number;
}

export interface NetJson {
  places: string[];
  transitions: string[];
  arcs: NetArc[];
}

export interface ApiError {
  status: number;
  detail: unknown;
}
