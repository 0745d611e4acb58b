/**
 * End-to-end run against the real session service, spawned from the
 * installed Python package.  Everything here goes through the HTTP client,
 * exactly as the page would: start a session, replay an idle spell that
 * earns a prompt, then correct the learner's map and watch the surprise
 * pair vanish from the next novelty report.
 */
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, CompanionApi, EventItem, FcmDoc, WorldDoc } from "../src/api.js";
import { blankLearnerFcm, surprisePair } from "../src/session.js";

const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
let stderr = "";

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/worlds`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error(`service never came up on ${BASE}\n${stderr}`);
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "curious_companion.cli", "serve", "--port", String(PORT)],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  service.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });
  await waitForService();
}, 30_000);

afterAll(() => {
  service?.kill("SIGTERM");
});

/** The learner knows every concept except transpiration, with its own
 *  (partly wrong) weights. */
function transportLearner(world: WorldDoc): FcmDoc {
  const learner = blankLearnerFcm(world.companion_fcm);
  learner.concepts = learner.concepts.filter((c) => c.name !== "transpiration");
  learner.edges = [
    { from: 1, to: 4, w: -0.8 },
    { from: 2, to: 4, w: 0.4 },
    { from: 3, to: 4, w: 0.3 },
    { from: 4, to: 5, w: 1 },
    { from: 4, to: 6, w: 1 / 3 },
    { from: 4, to: 7, w: 1 },
    { from: 6, to: 8, w: -0.2 },
  ];
  return learner;
}

describe("companion service round trip", () => {
  const api = new CompanionApi(BASE);

  it("prompts an idle learner, then drops the surprise after a correction", async () => {
    const { worlds } = await api.listWorlds();
    expect(worlds).toContain("plant-root");
    const world = await api.getWorld("plant-root");

    const sid = await api.createSession({
      world_id: "plant-root",
      learner_fcm: transportLearner(world),
      profile: { responses: [4, 4, 4, 4, 4, 4] },
      seed: 7,
    });

    let state = await api.getState(sid);
    expect(state.novelty.c_new).toEqual([9]);
    expect(surprisePair(state.novelty, 4, 7)).toBe(true);
    expect(state.novelty.activities["A_2"]?.novel).toBe(true);

    const events: EventItem[] = [
      { type: "input", t: 1000, kind: "key_press" },
      { type: "input", t: 2000, kind: "key_press" },
      { type: "input", t: 3000, kind: "key_press" },
      { type: "input", t: 4000, kind: "key_press" },
      { type: "move", t: 5000, x: 3, y: 5, z: 0 },
      { type: "idle", t: 15000 },
    ];
    const outcome = await api.postEvents(sid, events);
    expect(outcome.new_prompts).toBe(1);

    const { prompts } = await api.getPrompts(sid);
    expect(prompts[0]?.text).toBe(
      "There may be other ways of explaining the concept osmosis, " +
        "would you like to see how it is done in water molecule activity?",
    );
    expect(prompts[0]?.issued_at).toBe(8000);

    // the learner fixes the osmosis link to match reality
    await api.postEvents(sid, [
      {
        type: "fcm_edit",
        t: 16000,
        edit: { op: "set_edge", i: 4, j: 7, w: -0.6 },
      },
    ]);

    state = await api.getState(sid);
    expect(surprisePair(state.novelty, 4, 7)).toBe(false);
    expect(state.novelty.r_s).not.toContainEqual([4, 7]);
    // nothing A_2 teaches is new or surprising any more
    expect(state.novelty.activities["A_2"]?.novel).toBe(false);
  }, 20_000);

  it("rejects a session whose learner map is structurally broken", async () => {
    const world = await api.getWorld("plant-root");
    const broken = transportLearner(world);
    broken.edges.push({ from: 4, to: 7, w: 9 });
    const error = await api
      .createSession({
        world_id: "plant-root",
        learner_fcm: broken,
        profile: { responses: [4] },
        seed: 1,
      })
      .catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(422);
    expect((error as ApiError).code).toBe("invalid_document");
  }, 20_000);
});
