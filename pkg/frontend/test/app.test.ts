// Controller contract: every pixel comes from a server response, a
// stale fire recovers through a refetch, and only one mutation runs at
// a time.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { StepperApi } from "../src/api.js";
import { StepperApp, type AppElements } from "../src/app.js";
import fixture from "./fixtures/fig2_session.json";

function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(body),
  } as unknown as Response;
}

function elements(): AppElements {
  const make = () => {
    const node = document.createElement("div");
    document.body.append(node);
    return node;
  };
  return {
    places: make(),
    store: make(),
    modes: make(),
    status: make(),
    notice: make(),
    diagram: make(),
  };
}

function poolChips(ui: AppElements): string[] {
  const pool = [...ui.places.querySelectorAll(".place-panel")].find(
    (p) => p.querySelector(".place-name")?.textContent?.startsWith("student pool"),
  )!;
  return [...pool.querySelectorAll(".chip:not(.gone)")].map((c) => c.textContent ?? "");
}

const netJson = { places: [], transitions: [], arcs: [] };

beforeEach(() => {
  document.body.replaceChildren();
  vi.restoreAllMocks();
});

async function startApp(fetchMock: ReturnType<typeof vi.fn>) {
  vi.stubGlobal("fetch", fetchMock);
  const ui = elements();
  const app = new StepperApp(new StepperApi(""), ui);
  await app.start({ corpusId: "fig2" });
  return { app, ui };
}

function startupFetch() {
  return vi.fn(async (url: string) => {
    if (url.endsWith("/sessions")) return jsonResponse(fixture.create);
    if (url.endsWith("/enabled")) return jsonResponse(fixture.enabled);
    if (url.endsWith("/net")) return jsonResponse(netJson);
    throw new Error(`unexpected ${url}`);
  });
}

describe("startup", () => {
  it("renders the created session's state and modes", async () => {
    const { ui } = await startApp(startupFetch());
    expect(poolChips(ui)).toEqual(["(1,[1,2])", "(34,[])"]);
    expect(ui.modes.querySelectorAll("button.mode").length).toBe(
      fixture.enabled.modes.length,
    );
  });
});

describe("firing a mode", () => {
  it("updates panels only from the server response", async () => {
    let resolveFire!: (r: Response) => void;
    const firePromise = new Promise<Response>((resolve) => (resolveFire = resolve));
    const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
      if (url.endsWith("/sessions")) return jsonResponse(fixture.create);
      if (url.endsWith("/net")) return jsonResponse(netJson);
      if (url.endsWith("/fire")) {
        expect(JSON.parse(String(init?.body))).toEqual({
          modeIndex: 3,
          stateVersion: fixture.enabled.stateVersion,
        });
        return firePromise;
      }
      if (url.endsWith("/enabled")) return jsonResponse(fixture.enabled);
      throw new Error(`unexpected ${url}`);
    });
    const { ui } = await startApp(fetchMock);

    const before = poolChips(ui);
    const button = [...ui.modes.querySelectorAll("button.mode")].find(
      (b) => b.getAttribute("data-mode-index") === "3",
    ) as HTMLButtonElement;
    button.click();

    // request in flight: the view must not change on its own
    await Promise.resolve();
    expect(poolChips(ui)).toEqual(before);

    resolveFire(jsonResponse(fixture.fireResponse));
    await vi.waitFor(() => {
      expect(poolChips(ui)).toEqual(["(1,[1,2])"]);
    });
    // the enrolled panel shows exactly the server's tokens
    const enrolled = [...ui.places.querySelectorAll(".place-panel")].find(
      (p) => p.querySelector(".place-name")?.textContent?.startsWith("enrolled student"),
    )!;
    const chips = [...enrolled.querySelectorAll(".chip:not(.gone)")].map((c) => c.textContent);
    expect(chips).toEqual(
      fixture.fireResponse.state.places["enrolled student"].flatMap((t: { text: string; count: number }) =>
        Array(t.count).fill(t.text),
      ),
    );
  });

  it("recovers from a stale fire with a notice and a refetch", async () => {
    const calls: string[] = [];
    const fetchMock = vi.fn(async (url: string) => {
      calls.push(url);
      if (url.endsWith("/sessions")) return jsonResponse(fixture.create);
      if (url.endsWith("/net")) return jsonResponse(netJson);
      if (url.endsWith("/fire")) return jsonResponse({ detail: "stale state version" }, 409);
      if (url.endsWith("/enabled")) return jsonResponse(fixture.enabled);
      if (url.endsWith("/state")) return jsonResponse(fixture.create.state);
      throw new Error(`unexpected ${url}`);
    });
    const { ui } = await startApp(fetchMock);

    const button = ui.modes.querySelector("button.mode") as HTMLButtonElement;
    button.click();
    await vi.waitFor(() => {
      expect(ui.notice.textContent).toContain("stale");
    });
    // refreshed from the server: state and enabled both refetched
    expect(calls.filter((u) => u.endsWith("/state")).length).toBe(1);
    expect(calls.filter((u) => u.endsWith("/enabled")).length).toBeGreaterThanOrEqual(2);
    expect(poolChips(ui)).toEqual(["(1,[1,2])", "(34,[])"]);
  });
});

describe("undo", () => {
  it("repaints from the undo response", async () => {
    const undoResponse = {
      state: fixture.create.state,
      diff: { places: {}, store: {} },
    };
    const fetchMock = vi.fn(async (url: string) => {
      if (url.endsWith("/sessions")) return jsonResponse(fixture.create);
      if (url.endsWith("/net")) return jsonResponse(netJson);
      if (url.endsWith("/enabled")) return jsonResponse(fixture.enabled);
      if (url.endsWith("/undo")) return jsonResponse(undoResponse);
      throw new Error(`unexpected ${url}`);
    });
    const { app, ui } = await startApp(fetchMock);
    await app.undo();
    expect(poolChips(ui)).toEqual(["(1,[1,2])", "(34,[])"]);
  });
});
