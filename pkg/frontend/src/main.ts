/**
 * Page wiring: pick a world, start a session, then keep the map, the
 * knowledge editor, and the prompt toasts in sync by polling the service.
 */

import { CompanionApi, StateDoc, WorldDoc } from "./api.js";
import { FcmEditor } from "./fcmEditor.js";
import {
  SessionClock,
  SessionController,
  blankLearnerFcm,
} from "./session.js";
import { ToastStack } from "./toasts.js";
import { WorldView } from "./worldView.js";

const POLL_MS = 500;
const INPUT_THROTTLE_MS = 150;

function el<T extends HTMLElement>(doc: Document, id: string): T {
  const found = doc.getElementById(id);
  if (!found) {
    throw new Error(`missing #${id}`);
  }
  return found as T;
}

export async function bootstrap(doc: Document, api: CompanionApi): Promise<void> {
  const worldSelect = el<HTMLSelectElement>(doc, "world-select");
  const seedInput = el<HTMLInputElement>(doc, "seed");
  const responsesInput = el<HTMLInputElement>(doc, "responses");
  const startButton = el<HTMLButtonElement>(doc, "start");
  const status = el<HTMLElement>(doc, "status");

  const { worlds } = await api.listWorlds();
  for (const id of worlds) {
    const option = doc.createElement("option");
    option.value = id;
    option.textContent = id;
    worldSelect.appendChild(option);
  }

  startButton.addEventListener("click", async () => {
    startButton.disabled = true;
    try {
      const world = await api.getWorld(worldSelect.value);
      await startSession(doc, api, world, {
        seed: Number(seedInput.value) || 7,
        responses: responsesInput.value
          .split(",")
          .map((r) => Number(r.trim()))
          .filter((r) => Number.isFinite(r) && r >= 1 && r <= 7),
      });
    } catch (error) {
      status.textContent = `could not start: ${String(error)}`;
      startButton.disabled = false;
    }
  });
}

async function startSession(
  doc: Document,
  api: CompanionApi,
  world: WorldDoc,
  options: { seed: number; responses: number[] },
): Promise<void> {
  const status = el<HTMLElement>(doc, "status");
  const responses = options.responses.length > 0 ? options.responses : [4];
  const sid = await api.createSession({
    world_id: world.id,
    learner_fcm: blankLearnerFcm(world.companion_fcm),
    profile: { responses },
    seed: options.seed,
  });

  const clock = new SessionClock();
  let view: WorldView | null = null;
  let editor: FcmEditor | null = null;

  const toasts = new ToastStack(el(doc, "toasts"), (index, response) => {
    void controller.ackPrompt(index, response);
  });

  const controller = new SessionController(api, sid, clock, {
    onState: (state: StateDoc) => {
      view?.update(state);
      editor?.setLearner(state.learner_fcm);
      const wait = state.wait
        ? ` (watching ${state.wait.candidates.join(", ")})`
        : "";
      status.textContent = `t=${state.last_t}ms${wait}`;
    },
    onPrompts: (prompts) => toasts.showAll(prompts),
    onError: (error) => {
      status.textContent = `error: ${String(error)}`;
    },
  });

  view = new WorldView(
    el(doc, "map"),
    world,
    { width: 480, height: 480 },
    {
      onMove: (x, y) => void controller.moveTo(x, y),
      onEngage: (aid) => void controller.engage(aid),
    },
  );
  editor = new FcmEditor(
    el(doc, "editor"),
    world.companion_fcm,
    blankLearnerFcm(world.companion_fcm),
    (edit) => void controller.editFcm(edit),
  );

  // raw typing keeps the engine's action-timing statistics honest
  let lastInput = 0;
  doc.addEventListener("keydown", () => {
    const now = Date.now();
    if (now - lastInput >= INPUT_THROTTLE_MS) {
      lastInput = now;
      void controller.input("key_press");
    }
  });

  await controller.refresh();
  setInterval(() => void controller.refresh(), POLL_MS);
}

declare global {
  interface Window {
    companionBootstrapped?: boolean;
  }
}

// auto-start in a real page; tests call bootstrap() themselves
if (typeof window !== "undefined" && window.document.getElementById("world-select")) {
  if (!window.companionBootstrapped) {
    window.companionBootstrapped = true;
    void bootstrap(window.document, new CompanionApi(""));
  }
}
