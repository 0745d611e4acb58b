/**
 * Typed client for the companion session service.  Every interaction with
 * the engine goes through these HTTP calls; the UI holds no logic of its
 * own about novelty or timing.
 */

export interface PositionDoc {
  x: number;
  y: number;
  z: number;
}

export interface ConceptDoc {
  id: number;
  name: string;
}

export interface EdgeDoc {
  from: number;
  to: number;
  w: number;
}

export interface FcmDoc {
  concepts: ConceptDoc[];
  edges: EdgeDoc[];
}

export interface ActivityDoc {
  id: string;
  name: string;
  objectives: string;
  background: string;
  concepts: number[];
  position: PositionDoc;
  interaction_radius: number;
}

export interface WorldDoc {
  id: string;
  name: string;
  bounds: { min: PositionDoc; max: PositionDoc };
  spawn: PositionDoc;
  vicinity_radius: number;
  companion_fcm: FcmDoc;
  activities: ActivityDoc[];
}

export interface TriggerDoc {
  kind: "new_concept" | "surprise_concept";
  concept_id: number;
}

export interface NoveltyDoc {
  c_new: number[];
  r_s: [number, number][];
  activities: Record<string, { novel: boolean; triggers: TriggerDoc[] }>;
}

export interface WaitDoc {
  candidates: string[];
  opened_at: number;
  deadline: number;
  tau: number;
}

export interface StateDoc {
  session_id: string;
  last_t: number;
  avatar: PositionDoc;
  engaged: string | null;
  learner_fcm: FcmDoc;
  novelty: NoveltyDoc;
  wait: WaitDoc | null;
  prompt_count: number;
}

export interface PromptDoc {
  index: number;
  text: string;
  activity_id: string;
  template: string;
  concept_id: number;
  issued_at: number;
  ack: string | null;
}

export type EventItem =
  | { type: "move"; t: number; x: number; y: number; z?: number }
  | { type: "input"; t: number; kind: string }
  | { type: "engage"; t: number; activity_id: string }
  | { type: "fcm_edit"; t: number; edit: FcmEditDoc }
  | { type: "prompt_ack"; t: number; index: number; response: "accept" | "ignore" }
  | { type: "idle"; t: number };

export type FcmEditDoc =
  | { op: "add_concept"; id: number }
  | { op: "set_edge"; i: number; j: number; w: number }
  | { op: "clear_edge"; i: number; j: number };

export interface EventsOutcome {
  ok: boolean;
  last_t: number;
  new_prompts: number;
  wait_active: boolean;
}

export interface CreateSessionRequest {
  world_id: string;
  learner_fcm: FcmDoc;
  profile: { responses: number[] };
  seed: number;
  policy?: Record<string, unknown>;
}

interface ErrorDetail {
  code?: string;
  message?: string;
  violations?: { code: string; message: string }[];
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly violations: { code: string; message: string }[];

  constructor(status: number, detail: ErrorDetail | string | undefined) {
    const info = typeof detail === "object" && detail !== null ? detail : {};
    super(info.message ?? (typeof detail === "string" ? detail : `HTTP ${status}`));
    this.name = "ApiError";
    this.status = status;
    this.code = info.code ?? "http_error";
    this.violations = info.violations ?? [];
  }
}

async function parseError(response: Response): Promise<never> {
  let detail: ErrorDetail | string | undefined;
  try {
    detail = (await response.json()).detail;
  } catch {
    detail = undefined;
  }
  throw new ApiError(response.status, detail);
}

export class CompanionApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  private json(method: string, body: unknown): RequestInit {
    return {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    };
  }

  listWorlds(): Promise<{ worlds: string[] }> {
    return this.request("/worlds");
  }

  getWorld(id: string): Promise<WorldDoc> {
    return this.request(`/worlds/${encodeURIComponent(id)}`);
  }

  async createSession(req: CreateSessionRequest): Promise<string> {
    const out = await this.request<{ session_id: string }>(
      "/sessions",
      this.json("POST", req),
    );
    return out.session_id;
  }

  getState(sid: string): Promise<StateDoc> {
    return this.request(`/sessions/${encodeURIComponent(sid)}/state`);
  }

  getPrompts(
    sid: string,
    since = 0,
  ): Promise<{ prompts: PromptDoc[]; next: number }> {
    return this.request(
      `/sessions/${encodeURIComponent(sid)}/prompts?since=${since}`,
    );
  }

  postEvents(sid: string, events: EventItem[]): Promise<EventsOutcome> {
    return this.request(
      `/sessions/${encodeURIComponent(sid)}/events`,
      this.json("POST", { events }),
    );
  }

  putFcm(sid: string, fcm: FcmDoc, t?: number): Promise<{ ok: boolean; last_t: number }> {
    const body: { fcm: FcmDoc; t?: number } = { fcm };
    if (t !== undefined) {
      body.t = t;
    }
    return this.request(
      `/sessions/${encodeURIComponent(sid)}/fcm`,
      this.json("PUT", body),
    );
  }
}
