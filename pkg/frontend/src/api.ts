/**
 * Typed client for the degreeplan HTTP API.
 *
 * The server is stateless: every plan request carries the full
 * transcript and the accumulated preference edits, so the client owns
 * all session state and simply replays it on each run.
 */

export interface TermInfo {
  s: number;
  token: string;
}

export interface CourseInfo {
  code: string;
  title: string;
  credits: number;
  difficulty: number;
  offered: number[];
  flags: string[];
}

export interface GroupInfo {
  name: string;
  kind: string;
  mode: string;
  count: number;
  per_term: boolean;
  members: string[];
}

export interface CatalogInfo {
  anchor: string;
  s_max: number;
  total_credits: number;
  libed_credits: number;
  max_credits_per_term: number;
  max_credits_per_term_honors: number;
  terms: TermInfo[];
  courses: CourseInfo[];
  groups: GroupInfo[];
}

export interface TranscriptEntry {
  code: string;
  grade: number;
  term: number | "TRANSFER";
}

export interface Preferences {
  objective: "gpa" | "time";
  honors: boolean;
  summers_off: boolean;
  max_courses_per_term?: number;
  thesis_companion_max?: number;
  desired: string[];
  rejected: string[];
  pins: Record<string, number>;
  windows: Record<string, number[]>;
  concentration?: string;
}

export function defaultPreferences(): Preferences {
  return {
    objective: "gpa",
    honors: false,
    summers_off: false,
    desired: [],
    rejected: [],
    pins: {},
    windows: {},
  };
}

export interface PlanRequest {
  transcript: TranscriptEntry[];
  current_term?: number | string;
  preferences: Preferences;
}

export interface PlannedCourse {
  code: string;
  title: string;
  credits: number;
  difficulty: number;
  estimated_grade: number | null;
}

export interface PlanTerm {
  s: number;
  token: string;
  courses: PlannedCourse[];
}

export interface PlanResult {
  status: string;
  objective: number;
  plan: {
    completion_term: number;
    prior: string[];
    terms: PlanTerm[];
  };
  summary: {
    total_credits: number;
    max_difficulty_gap: number;
    expected_gpa: number | null;
  };
  text: string;
}

export interface PredictResult {
  estimates: Record<string, number>;
  eligible: string[];
  threshold: number;
}

/** Error payload from the service, including conflicting constraint tags. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly tags: string[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ApiClient {
  getCatalog(): Promise<CatalogInfo>;
  plan(request: PlanRequest): Promise<PlanResult>;
  predict(transcript: TranscriptEntry[]): Promise<PredictResult>;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class HttpApiClient implements ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  getCatalog(): Promise<CatalogInfo> {
    return this.request<CatalogInfo>("GET", "/api/catalog");
  }

  plan(request: PlanRequest): Promise<PlanResult> {
    return this.request<PlanResult>("POST", "/api/plan", request);
  }

  predict(transcript: TranscriptEntry[]): Promise<PredictResult> {
    return this.request<PredictResult>("POST", "/api/predict", { transcript });
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const err = payload as { code?: string; message?: string; tags?: string[] };
      throw new ApiError(
        response.status,
        err.code ?? "error",
        err.message ?? `request failed with status ${response.status}`,
        err.tags ?? [],
      );
    }
    return payload as T;
  }
}
