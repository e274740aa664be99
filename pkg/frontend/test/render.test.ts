// Rendering against a recorded server fixture: the view must show
// exactly what the service said, in the order it said it.

import { beforeEach, describe, expect, it } from "vitest";

import { renderModes, renderNet, renderPlaces, renderStatus, renderStore } from "../src/render.js";
import type { EnabledJson, FireResponse, NetJson, StateJson } from "../src/types.js";
import fixture from "./fixtures/fig2_session.json";

const initialState = fixture.create.state as unknown as StateJson;
const enabled = fixture.enabled as unknown as EnabledJson;
const fireResponse = fixture.fireResponse as unknown as FireResponse;

function div(): HTMLElement {
  const node = document.createElement("div");
  document.body.append(node);
  return node;
}

beforeEach(() => {
  document.body.replaceChildren();
});

describe("place panels", () => {
  it("renders the recorded pool chips exactly", () => {
    const host = div();
    renderPlaces(host, initialState);
    const pool = [...host.querySelectorAll(".place-panel")].find(
      (p) => p.querySelector(".place-name")?.textContent?.startsWith("student pool"),
    )!;
    const chips = [...pool.querySelectorAll(".chip")].map((c) => c.textContent);
    expect(chips).toEqual(["(1,[1,2])", "(34,[])"]);
  });

  it("renders one panel per place with counts", () => {
    const host = div();
    renderPlaces(host, initialState);
    const names = [...host.querySelectorAll(".place-name")].map(
      (n) => n.childNodes[0].textContent,
    );
    expect(names).toEqual(Object.keys(initialState.places));
    const onCourse = [...host.querySelectorAll(".place-panel")].find(
      (p) => p.querySelector(".place-name")?.textContent?.startsWith("student on course"),
    )!;
    expect(onCourse.querySelector(".badge")?.textContent).toBe("2");
  });

  it("highlights additions and shows removals from the server diff", () => {
    const host = div();
    renderPlaces(host, fireResponse.state, fireResponse.diff);
    const enrolled = [...host.querySelectorAll(".place-panel")].find(
      (p) => p.querySelector(".place-name")?.textContent?.startsWith("enrolled student"),
    )!;
    const fresh = [...enrolled.querySelectorAll(".chip.fresh")].map((c) => c.textContent);
    expect(fresh).toEqual(["(34,[])"]);
    const pool = [...host.querySelectorAll(".place-panel")].find(
      (p) => p.querySelector(".place-name")?.textContent?.startsWith("student pool"),
    )!;
    const gone = [...pool.querySelectorAll(".chip.gone")].map((c) => c.textContent);
    expect(gone).toEqual(["(34,[])"]);
  });
});

describe("mode list", () => {
  it("keeps the server's order and indices", () => {
    const host = div();
    renderModes(host, enabled, () => {});
    const buttons = [...host.querySelectorAll("button.mode")];
    expect(buttons.map((b) => b.getAttribute("data-mode-index"))).toEqual(
      enabled.modes.map((m) => String(m.modeIndex)),
    );
    expect(buttons.map((b) => b.querySelector(".mode-transition")?.textContent)).toEqual(
      enabled.modes.map((m) => m.transition),
    );
  });

  it("says so when nothing is enabled", () => {
    const host = div();
    renderModes(host, { stateVersion: 9, modes: [] }, () => {});
    expect(host.textContent).toContain("no enabled mode");
  });
});

describe("status and store", () => {
  it("shows a terminal badge only for terminal states", () => {
    const host = div();
    renderStatus(host, { ...initialState, terminal: true });
    expect(host.querySelector(".terminal-badge")).not.toBeNull();
    renderStatus(host, initialState);
    expect(host.querySelector(".terminal-badge")).toBeNull();
  });

  it("renders an empty store note for store-free models", () => {
    const host = div();
    renderStore(host, initialState);
    expect(host.textContent).toContain("no global data");
  });

  it("renders pointer rows for stored records", () => {
    const host = div();
    const state = {
      ...initialState,
      store: { port1: { value: null, text: "{completed: {1}}" } },
    } as StateJson;
    renderStore(host, state);
    expect(host.querySelector(".pointer-name")?.textContent).toBe("port1");
    expect(host.querySelector(".pointer-value")?.textContent).toBe("{completed: {1}}");
  });
});

describe("net diagram", () => {
  it("draws every node and arc", () => {
    const host = div();
    const net: NetJson = {
      places: ["a", "b"],
      transitions: ["t"],
      arcs: [
        { from: "a", to: "t", tokens: 1 },
        { from: "t", to: "b", tokens: 1 },
      ],
    };
    renderNet(host, net);
    expect(host.querySelectorAll("circle.place").length).toBe(2);
    expect(host.querySelectorAll("rect.transition").length).toBe(1);
    expect(host.querySelectorAll("line.arc").length).toBe(2);
  });
});
