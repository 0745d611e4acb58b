import { describe, expect, it, vi } from "vitest";

import {
  CompanionApi,
  NoveltyDoc,
  PromptDoc,
  StateDoc,
} from "../src/api.js";
import {
  SessionClock,
  SessionController,
  blankLearnerFcm,
  novelActivityIds,
  surprisePair,
} from "../src/session.js";

function fakeState(overrides: Partial<StateDoc> = {}): StateDoc {
  return {
    session_id: "s1",
    last_t: 0,
    avatar: { x: 0, y: 0, z: 0 },
    engaged: null,
    learner_fcm: { concepts: [], edges: [] },
    novelty: { c_new: [], r_s: [], activities: {} },
    wait: null,
    prompt_count: 0,
    ...overrides,
  };
}

describe("SessionClock", () => {
  it("is monotone and resumes past the server clock", () => {
    let wall = 1000;
    const clock = new SessionClock(() => wall);
    expect(clock.now()).toBe(0);
    wall = 1250;
    expect(clock.now()).toBe(250);
    clock.advanceTo(5000);
    expect(clock.now()).toBeGreaterThanOrEqual(5000);
    wall = 1300;
    expect(clock.now()).toBeGreaterThanOrEqual(5000);
    wall = 3000;
    const later = clock.now();
    wall = 2000; // wall clock glitch backwards
    expect(clock.now()).toBeGreaterThanOrEqual(later);
  });
});

describe("novelty helpers", () => {
  const novelty: NoveltyDoc = {
    c_new: [9],
    r_s: [
      [3, 4],
      [4, 7],
    ],
    activities: {
      A_1: { novel: false, triggers: [] },
      A_2: { novel: true, triggers: [{ kind: "surprise_concept", concept_id: 7 }] },
    },
  };

  it("finds surprise pairs by exact position", () => {
    expect(surprisePair(novelty, 4, 7)).toBe(true);
    expect(surprisePair(novelty, 7, 4)).toBe(false);
  });

  it("lists novel activity ids", () => {
    expect(novelActivityIds(novelty)).toEqual(["A_2"]);
  });
});

describe("blankLearnerFcm", () => {
  it("copies concepts and drops every edge", () => {
    const blank = blankLearnerFcm({
      concepts: [
        { id: 1, name: "a" },
        { id: 2, name: "b" },
      ],
      edges: [{ from: 1, to: 2, w: 0.5 }],
    });
    expect(blank.concepts).toEqual([
      { id: 1, name: "a" },
      { id: 2, name: "b" },
    ]);
    expect(blank.edges).toEqual([]);
  });
});

describe("SessionController", () => {
  function controllerWith(api: Partial<CompanionApi>, callbacks = {}) {
    let wall = 0;
    const clock = new SessionClock(() => wall);
    const controller = new SessionController(
      api as CompanionApi,
      "s1",
      clock,
      callbacks,
    );
    return { controller, advance: (ms: number) => (wall += ms) };
  }

  it("surfaces each prompt exactly once", async () => {
    const prompts: PromptDoc[] = [
      {
        index: 0,
        text: "hello",
        activity_id: "A_2",
        template: "surprising_concept",
        concept_id: 7,
        issued_at: 8000,
        ack: null,
      },
    ];
    const seen: PromptDoc[][] = [];
    const getState = vi
      .fn()
      .mockResolvedValue(fakeState({ prompt_count: 1, last_t: 8000 }));
    const getPrompts = vi.fn().mockResolvedValue({ prompts, next: 1 });
    const { controller } = controllerWith(
      { getState, getPrompts } as unknown as Partial<CompanionApi>,
      { onPrompts: (p: PromptDoc[]) => seen.push(p) },
    );

    await controller.refresh();
    await controller.refresh();
    expect(getPrompts).toHaveBeenCalledTimes(1);
    expect(getPrompts).toHaveBeenCalledWith("s1", 0);
    expect(seen).toEqual([prompts]);
  });

  it("stamps events with the session clock", async () => {
    const posted: unknown[] = [];
    const api = {
      postEvents: vi.fn(async (_sid: string, events: unknown[]) => {
        posted.push(...events);
        return { ok: true, last_t: 0, new_prompts: 0, wait_active: false };
      }),
      getState: vi.fn().mockResolvedValue(fakeState()),
      getPrompts: vi.fn().mockResolvedValue({ prompts: [], next: 0 }),
    };
    const { controller, advance } = controllerWith(
      api as unknown as Partial<CompanionApi>,
    );
    advance(1200);
    await controller.input("key_press");
    advance(300);
    await controller.moveTo(3, 5);
    await controller.ackPrompt(0, "ignore");
    expect(posted).toEqual([
      { type: "input", t: 1200, kind: "key_press" },
      { type: "move", t: 1500, x: 3, y: 5, z: 0 },
      { type: "prompt_ack", t: 1500, index: 0, response: "ignore" },
    ]);
  });

  it("routes failures to the error callback and keeps running", async () => {
    const errors: unknown[] = [];
    const api = {
      postEvents: vi.fn().mockRejectedValue(new Error("down")),
      getState: vi.fn().mockResolvedValue(fakeState()),
      getPrompts: vi.fn().mockResolvedValue({ prompts: [], next: 0 }),
    };
    const { controller } = controllerWith(
      api as unknown as Partial<CompanionApi>,
      { onError: (e: unknown) => errors.push(e) },
    );
    await controller.engage("A_2");
    expect(errors).toHaveLength(1);
    // the refresh after the failed send still happened
    expect(api.getState).toHaveBeenCalled();
  });
});
