/**
 * Prompt toasts.  Each engine prompt appears once, stays until answered,
 * and reports the learner's accept/ignore choice back through a callback.
 */

import { PromptDoc } from "./api.js";

export type AckResponse = "accept" | "ignore";

export class ToastStack {
  private readonly shown = new Set<number>();

  constructor(
    private readonly root: HTMLElement,
    private readonly onAck: (index: number, response: AckResponse) => void,
  ) {
    root.classList.add("toast-stack");
  }

  /** Number of toasts currently waiting for an answer. */
  get open(): number {
    return this.root.children.length;
  }

  show(prompt: PromptDoc): void {
    if (this.shown.has(prompt.index) || prompt.ack !== null) {
      return;
    }
    this.shown.add(prompt.index);

    const doc = this.root.ownerDocument;
    const toast = doc.createElement("div");
    toast.className = "toast";
    toast.dataset.promptIndex = String(prompt.index);

    const text = doc.createElement("p");
    text.textContent = prompt.text;
    toast.appendChild(text);

    const answer = (response: AckResponse) => {
      toast.remove();
      this.onAck(prompt.index, response);
    };
    for (const response of ["accept", "ignore"] as const) {
      const button = doc.createElement("button");
      button.type = "button";
      button.className = response;
      button.textContent = response === "accept" ? "Show me" : "Not now";
      button.addEventListener("click", () => answer(response));
      toast.appendChild(button);
    }
    this.root.appendChild(toast);
  }

  showAll(prompts: PromptDoc[]): void {
    for (const prompt of prompts) {
      this.show(prompt);
    }
  }
}
