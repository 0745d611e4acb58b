// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { FcmDoc, FcmEditDoc } from "../src/api.js";
import { FcmEditor, parseWeight } from "../src/fcmEditor.js";

const palette: FcmDoc = {
  concepts: [
    { id: 4, name: "salt concentration" },
    { id: 7, name: "osmosis" },
    { id: 9, name: "transpiration" },
  ],
  edges: [],
};

const learner: FcmDoc = {
  concepts: [
    { id: 4, name: "salt concentration" },
    { id: 7, name: "osmosis" },
  ],
  edges: [{ from: 4, to: 7, w: 1 }],
};

describe("parseWeight", () => {
  it("accepts the closed interval and treats blank as zero", () => {
    expect(parseWeight("0.5")).toBe(0.5);
    expect(parseWeight("-1")).toBe(-1);
    expect(parseWeight(" 1 ")).toBe(1);
    expect(parseWeight("")).toBe(0);
  });

  it("rejects junk and out-of-range values", () => {
    expect(parseWeight("abc")).toBeNull();
    expect(parseWeight("1.5")).toBeNull();
    expect(parseWeight("-2")).toBeNull();
    expect(parseWeight("Infinity")).toBeNull();
  });
});

describe("FcmEditor", () => {
  let root: HTMLElement;
  let edits: FcmEditDoc[];
  let editor: FcmEditor;

  function input(i: number, j: number): HTMLInputElement {
    return root.querySelector(
      `input[data-from="${i}"][data-to="${j}"]`,
    ) as HTMLInputElement;
  }

  beforeEach(() => {
    document.body.innerHTML = '<div id="editor"></div>';
    root = document.getElementById("editor") as HTMLElement;
    edits = [];
    editor = new FcmEditor(root, palette, learner, (e) => edits.push(e));
  });

  it("shows current weights and leaves the diagonal empty", () => {
    expect(input(4, 7).value).toBe("1");
    expect(input(7, 4).value).toBe("");
    expect(root.querySelector('input[data-from="4"][data-to="4"]')).toBeNull();
  });

  it("emits set_edge when a weight is corrected", () => {
    const field = input(4, 7);
    field.value = "-0.6";
    field.dispatchEvent(new Event("change"));
    expect(edits).toEqual([{ op: "set_edge", i: 4, j: 7, w: -0.6 }]);
  });

  it("emits clear_edge when a weight is blanked", () => {
    const field = input(4, 7);
    field.value = "";
    field.dispatchEvent(new Event("change"));
    expect(edits).toEqual([{ op: "clear_edge", i: 4, j: 7 }]);
  });

  it("marks invalid entries and emits nothing", () => {
    const field = input(4, 7);
    field.value = "2.5";
    field.dispatchEvent(new Event("change"));
    expect(edits).toEqual([]);
    expect(field.classList.contains("invalid")).toBe(true);
    field.value = "0.25";
    field.dispatchEvent(new Event("change"));
    expect(field.classList.contains("invalid")).toBe(false);
    expect(edits).toEqual([{ op: "set_edge", i: 4, j: 7, w: 0.25 }]);
  });

  it("offers only missing palette concepts and emits add_concept", () => {
    const select = root.querySelector(".add-concept select") as HTMLSelectElement;
    const options = Array.from(select.options).map((o) => o.value);
    expect(options).toEqual(["9"]);
    (root.querySelector(".add-concept button") as HTMLButtonElement).click();
    expect(edits).toEqual([{ op: "add_concept", id: 9 }]);
  });

  it("disables adding when the palette is exhausted", () => {
    editor.setLearner({
      concepts: palette.concepts,
      edges: [],
    });
    const select = root.querySelector(".add-concept select") as HTMLSelectElement;
    const button = root.querySelector(".add-concept button") as HTMLButtonElement;
    expect(select.disabled).toBe(true);
    expect(button.disabled).toBe(true);
  });

  it("re-renders from a fresh learner map", () => {
    editor.setLearner({
      concepts: learner.concepts,
      edges: [{ from: 4, to: 7, w: -0.6 }],
    });
    expect(input(4, 7).value).toBe("-0.6");
  });
});
