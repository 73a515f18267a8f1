/**
 * Pure view-model helpers: turn a plan response into a dense term grid
 * the UI can render directly (one cell per term, empty terms included).
 */

import { CatalogInfo, PlanResult, PlannedCourse } from "./api.js";

export interface GridCell {
  s: number;
  token: string;
  courses: PlannedCourse[];
  credits: number;
  load: number;
}

export interface PlanGrid {
  cells: GridCell[];
  completionTerm: number;
  totalCredits: number;
}

export function planGrid(plan: PlanResult, catalog: CatalogInfo): PlanGrid {
  const byTerm = new Map(plan.plan.terms.map((t) => [t.s, t]));
  const tokens = new Map(catalog.terms.map((t) => [t.s, t.token]));
  const horizon = Math.max(plan.plan.completion_term, ...catalog.terms.map((t) => t.s));
  const cells: GridCell[] = [];
  for (let s = 1; s <= horizon; s += 1) {
    const courses = byTerm.get(s)?.courses ?? [];
    cells.push({
      s,
      token: byTerm.get(s)?.token ?? tokens.get(s) ?? String(s),
      courses,
      credits: courses.reduce((sum, c) => sum + c.credits, 0),
      load: courses.reduce((sum, c) => sum + c.difficulty, 0),
    });
  }
  return {
    cells,
    completionTerm: plan.plan.completion_term,
    totalCredits: cells.reduce((sum, cell) => sum + cell.credits, 0),
  };
}
