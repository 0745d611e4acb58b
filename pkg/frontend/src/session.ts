/**
 * Client-side session controller: owns the session clock, batches events,
 * and tracks the prompt cursor so every prompt is surfaced exactly once.
 *
 * The clock maps wall time onto session milliseconds.  Event times must
 * never go backwards, so the clock is monotone even if the wall clock
 * jumps.
 */

import {
  CompanionApi,
  EventItem,
  FcmDoc,
  FcmEditDoc,
  NoveltyDoc,
  PromptDoc,
  StateDoc,
} from "./api.js";

export class SessionClock {
  private origin: number;
  private floor = 0;

  constructor(private readonly wallNow: () => number = () => Date.now()) {
    this.origin = this.wallNow();
  }

  /** Session time in whole milliseconds, never decreasing. */
  now(): number {
    const t = Math.max(0, Math.round(this.wallNow() - this.origin));
    this.floor = Math.max(this.floor, t);
    return this.floor;
  }

  /** Jump forward so the next now() is at least t (used after reloads). */
  advanceTo(t: number): void {
    this.floor = Math.max(this.floor, t);
    const elapsed = this.wallNow() - this.origin;
    if (elapsed < t) {
      this.origin = this.wallNow() - t;
    }
  }
}

export function surprisePair(novelty: NoveltyDoc, i: number, j: number): boolean {
  return novelty.r_s.some(([a, b]) => a === i && b === j);
}

/** Activity ids flagged novel, in id order. */
export function novelActivityIds(novelty: NoveltyDoc): string[] {
  return Object.keys(novelty.activities)
    .filter((aid) => novelty.activities[aid]?.novel)
    .sort();
}

export interface SessionCallbacks {
  onState?: (state: StateDoc) => void;
  onPrompts?: (prompts: PromptDoc[]) => void;
  onError?: (error: unknown) => void;
}

export class SessionController {
  private cursor = 0;
  state: StateDoc | null = null;

  constructor(
    private readonly api: CompanionApi,
    readonly sid: string,
    readonly clock: SessionClock,
    private readonly callbacks: SessionCallbacks = {},
  ) {}

  /** Pull current state, then any prompts past the cursor. */
  async refresh(): Promise<void> {
    try {
      const state = await this.api.getState(this.sid);
      this.state = state;
      this.clock.advanceTo(state.last_t);
      this.callbacks.onState?.(state);
      if (state.prompt_count > this.cursor) {
        const page = await this.api.getPrompts(this.sid, this.cursor);
        this.cursor = page.next;
        if (page.prompts.length > 0) {
          this.callbacks.onPrompts?.(page.prompts);
        }
      }
    } catch (error) {
      this.callbacks.onError?.(error);
    }
  }

  private async send(items: EventItem[]): Promise<void> {
    try {
      await this.api.postEvents(this.sid, items);
    } catch (error) {
      this.callbacks.onError?.(error);
    }
    await this.refresh();
  }

  moveTo(x: number, y: number, z = 0): Promise<void> {
    return this.send([{ type: "move", t: this.clock.now(), x, y, z }]);
  }

  input(kind: string): Promise<void> {
    return this.send([{ type: "input", t: this.clock.now(), kind }]);
  }

  engage(activityId: string): Promise<void> {
    return this.send([
      { type: "engage", t: this.clock.now(), activity_id: activityId },
    ]);
  }

  editFcm(edit: FcmEditDoc): Promise<void> {
    return this.send([{ type: "fcm_edit", t: this.clock.now(), edit }]);
  }

  ackPrompt(index: number, response: "accept" | "ignore"): Promise<void> {
    return this.send([
      { type: "prompt_ack", t: this.clock.now(), index, response },
    ]);
  }

  async replaceFcm(fcm: FcmDoc): Promise<void> {
    try {
      await this.api.putFcm(this.sid, fcm, this.clock.now());
    } catch (error) {
      this.callbacks.onError?.(error);
    }
    await this.refresh();
  }
}

/** A blank starting map: the world's concepts with every edge unset. */
export function blankLearnerFcm(companion: FcmDoc): FcmDoc {
  return {
    concepts: companion.concepts.map((c) => ({ id: c.id, name: c.name })),
    edges: [],
  };
}
