/**
 * Editor for the learner's knowledge map.  The companion map supplies the
 * concept palette; the learner map is shown as a grid of weight inputs.
 * Every change is emitted as one edit operation, so the engine re-checks
 * novelty after each correction.
 */

import { FcmDoc, FcmEditDoc } from "./api.js";

/** Parse a weight field; null when it is not a number in [-1, 1]. */
export function parseWeight(raw: string): number | null {
  const text = raw.trim();
  if (text === "") {
    return 0;
  }
  const value = Number(text);
  if (!Number.isFinite(value) || value < -1 || value > 1) {
    return null;
  }
  return value;
}

export class FcmEditor {
  private learner: FcmDoc;

  constructor(
    private readonly root: HTMLElement,
    private readonly palette: FcmDoc,
    learner: FcmDoc,
    private readonly onEdit: (edit: FcmEditDoc) => void,
  ) {
    this.learner = learner;
    root.classList.add("fcm-editor");
    this.render();
  }

  /** Replace the displayed map (called on every state refresh). */
  setLearner(learner: FcmDoc): void {
    this.learner = learner;
    this.render();
  }

  private weightOf(i: number, j: number): number {
    const hit = this.learner.edges.find((e) => e.from === i && e.to === j);
    return hit ? hit.w : 0;
  }

  private render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";

    const ids = this.learner.concepts.map((c) => c.id);
    const names = new Map(this.learner.concepts.map((c) => [c.id, c.name]));

    const table = doc.createElement("table");
    const head = doc.createElement("tr");
    head.appendChild(doc.createElement("th"));
    for (const j of ids) {
      const th = doc.createElement("th");
      th.textContent = String(j);
      th.title = names.get(j) ?? "";
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const i of ids) {
      const row = doc.createElement("tr");
      const label = doc.createElement("th");
      label.textContent = `${i} ${names.get(i) ?? ""}`;
      row.appendChild(label);
      for (const j of ids) {
        const cell = doc.createElement("td");
        if (i !== j) {
          cell.appendChild(this.weightInput(i, j));
        }
        row.appendChild(cell);
      }
      table.appendChild(row);
    }
    this.root.appendChild(table);
    this.root.appendChild(this.addConceptControl());
  }

  private weightInput(i: number, j: number): HTMLInputElement {
    const input = this.root.ownerDocument.createElement("input");
    input.type = "text";
    input.className = "weight";
    input.dataset.from = String(i);
    input.dataset.to = String(j);
    const w = this.weightOf(i, j);
    input.value = w === 0 ? "" : String(w);
    input.addEventListener("change", () => {
      const value = parseWeight(input.value);
      if (value === null) {
        input.classList.add("invalid");
        return;
      }
      input.classList.remove("invalid");
      if (value === 0) {
        this.onEdit({ op: "clear_edge", i, j });
      } else {
        this.onEdit({ op: "set_edge", i, j, w: value });
      }
    });
    return input;
  }

  private addConceptControl(): HTMLElement {
    const doc = this.root.ownerDocument;
    const wrap = doc.createElement("div");
    wrap.className = "add-concept";

    const known = new Set(this.learner.concepts.map((c) => c.id));
    const missing = this.palette.concepts.filter((c) => !known.has(c.id));

    const select = doc.createElement("select");
    for (const c of missing) {
      const option = doc.createElement("option");
      option.value = String(c.id);
      option.textContent = `${c.id} ${c.name}`;
      select.appendChild(option);
    }
    select.disabled = missing.length === 0;

    const button = doc.createElement("button");
    button.type = "button";
    button.textContent = "Add concept";
    button.disabled = missing.length === 0;
    button.addEventListener("click", () => {
      const id = Number(select.value);
      if (Number.isInteger(id) && id > 0) {
        this.onEdit({ op: "add_concept", id });
      }
    });

    wrap.appendChild(select);
    wrap.appendChild(button);
    return wrap;
  }
}
