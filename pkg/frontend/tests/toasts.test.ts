// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { PromptDoc } from "../src/api.js";
import { ToastStack } from "../src/toasts.js";

function prompt(index: number, overrides: Partial<PromptDoc> = {}): PromptDoc {
  return {
    index,
    text: `prompt ${index}`,
    activity_id: "A_2",
    template: "surprising_concept",
    concept_id: 7,
    issued_at: 8000,
    ack: null,
    ...overrides,
  };
}

describe("ToastStack", () => {
  let root: HTMLElement;
  let acks: [number, string][];
  let stack: ToastStack;

  beforeEach(() => {
    document.body.innerHTML = '<div id="toasts"></div>';
    root = document.getElementById("toasts") as HTMLElement;
    acks = [];
    stack = new ToastStack(root, (index, response) => acks.push([index, response]));
  });

  it("shows a prompt once, even when polled again", () => {
    stack.show(prompt(0));
    stack.showAll([prompt(0), prompt(1)]);
    expect(stack.open).toBe(2);
    expect(root.textContent).toContain("prompt 0");
    expect(root.textContent).toContain("prompt 1");
  });

  it("skips prompts that were already answered server-side", () => {
    stack.show(prompt(0, { ack: "ignore" }));
    expect(stack.open).toBe(0);
  });

  it("reports accept and removes the toast", () => {
    stack.show(prompt(0));
    const button = root.querySelector("button.accept") as HTMLButtonElement;
    button.click();
    expect(acks).toEqual([[0, "accept"]]);
    expect(stack.open).toBe(0);
  });

  it("reports ignore", () => {
    stack.show(prompt(3));
    (root.querySelector("button.ignore") as HTMLButtonElement).click();
    expect(acks).toEqual([[3, "ignore"]]);
  });
});
