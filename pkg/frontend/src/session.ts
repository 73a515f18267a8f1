/**
 * Client-side planning session.
 *
 * Holds the transcript and the accumulated preference edits, replays
 * them on every run (the server keeps no state), and keeps the last
 * good plan around when an edit turns out infeasible so the view can
 * show a banner without losing the schedule on screen.
 */

import {
  ApiClient,
  ApiError,
  Preferences,
  PlanResult,
  TranscriptEntry,
  defaultPreferences,
} from "./api.js";

export interface InfeasibilityBanner {
  message: string;
  tags: string[];
}

export class PlannerSession {
  readonly preferences: Preferences;
  plan: PlanResult | null = null;
  banner: InfeasibilityBanner | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly transcript: TranscriptEntry[] = [],
    private readonly currentTerm?: number | string,
    preferences?: Preferences,
  ) {
    this.preferences = preferences ?? defaultPreferences();
  }

  /** Solve with the current state.  Returns true when a plan came back. */
  async run(): Promise<boolean> {
    try {
      this.plan = await this.client.plan({
        transcript: this.transcript,
        current_term: this.currentTerm,
        preferences: this.preferences,
      });
      this.banner = null;
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // keep the previous plan visible under the banner
        this.banner = { message: error.message, tags: error.tags };
        return false;
      }
      throw error;
    }
  }

  setObjective(objective: "gpa" | "time"): void {
    this.preferences.objective = objective;
  }

  /** Exclude a course; clears any desire or pin it carried. */
  rejectCourse(code: string): void {
    if (!this.preferences.rejected.includes(code)) {
      this.preferences.rejected.push(code);
    }
    this.preferences.desired = this.preferences.desired.filter((c) => c !== code);
    delete this.preferences.pins[code];
  }

  desireCourse(code: string): void {
    this.preferences.rejected = this.preferences.rejected.filter((c) => c !== code);
    if (!this.preferences.desired.includes(code)) {
      this.preferences.desired.push(code);
    }
  }

  /** Term the current plan schedules a course in, or null. */
  termOf(code: string): number | null {
    if (!this.plan) return null;
    for (const term of this.plan.plan.terms) {
      if (term.courses.some((c) => c.code === code)) return term.s;
    }
    return null;
  }

  /**
   * Drag a course to a term: pin it there and re-solve.  On
   * infeasibility the pin is rolled back, the previous plan stays, and
   * the banner carries the conflicting constraint tags.
   */
  async moveCourse(code: string, term: number): Promise<boolean> {
    const previousPin = this.preferences.pins[code];
    const previousPlan = this.plan;
    this.preferences.pins[code] = term;
    const ok = await this.run();
    if (!ok) {
      if (previousPin === undefined) {
        delete this.preferences.pins[code];
      } else {
        this.preferences.pins[code] = previousPin;
      }
      this.plan = previousPlan;
    }
    return ok;
  }
}
