// Page bootstrap: wires the controls to a StepperApp instance.

import { StepperApi } from "./api.js";
import { StepperApp } from "./app.js";
import { showNotice } from "./render.js";

function required(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

const app = new StepperApp(new StepperApi(""), {
  places: required("places"),
  store: required("store"),
  modes: required("modes"),
  status: required("status"),
  notice: required("notice"),
  diagram: required("diagram"),
});

const corpusSelect = required("corpus-select") as HTMLSelectElement;
const sourceBox = required("source-box") as HTMLTextAreaElement;
const noticeBox = required("notice");

async function load(body: { source?: string; corpusId?: string }) {
  try {
    await app.start(body);
  } catch (err: unknown) {
    const detail = (err as { detail?: { errors?: { line?: number; message: string }[] } }).detail;
    if (detail?.errors) {
      const lines = detail.errors
        .map((e) => (e.line ? `${e.line}: ${e.message}` : e.message))
        .join("\n");
      showNotice(noticeBox, "error", `model rejected:\n${lines}`);
    } else {
      showNotice(noticeBox, "error", "could not create the session");
    }
  }
}

required("load-corpus").addEventListener("click", () => {
  void load({ corpusId: corpusSelect.value });
});
required("load-source").addEventListener("click", () => {
  void load({ source: sourceBox.value });
});
required("undo").addEventListener("click", () => void app.undo());
required("reset").addEventListener("click", () => void app.reset());
required("random-step").addEventListener("click", () => void app.randomStep());

void load({ corpusId: corpusSelect.value });
