import { describe, expect, it } from "vitest";

import { ApiError, HttpApiClient, defaultPreferences } from "../src/api.js";
import { planGrid } from "../src/grid.js";
import { PlannerSession } from "../src/session.js";
import { FAKE_CATALOG, FakeClient } from "./fake_client.js";

function scheduled(session: PlannerSession): Map<string, number> {
  const out = new Map<string, number>();
  for (const term of session.plan?.plan.terms ?? []) {
    for (const course of term.courses) out.set(course.code, term.s);
  }
  return out;
}

describe("edit loop: run, reject, re-run", () => {
  it("re-plans around a rejected course", async () => {
    const session = new PlannerSession(new FakeClient());
    expect(await session.run()).toBe(true);
    expect([...scheduled(session).keys()]).toEqual(["A", "B"]);

    session.rejectCourse("B");
    expect(await session.run()).toBe(true);
    const after = scheduled(session);
    expect([...after.keys()]).toEqual(["A", "C"]);
    expect(after.get("C")).toBe(2); // earliest offering of the replacement
    expect(session.banner).toBeNull();
  });

  it("rejecting a course clears its pin and desire", async () => {
    const session = new PlannerSession(new FakeClient());
    session.desireCourse("B");
    session.preferences.pins["B"] = 3;
    session.rejectCourse("B");
    expect(session.preferences.desired).toEqual([]);
    expect(session.preferences.pins).toEqual({});
  });
});

describe("move to term", () => {
  it("pins the course at the requested term", async () => {
    const session = new PlannerSession(new FakeClient());
    await session.run();
    expect(session.termOf("A")).toBe(1);

    expect(await session.moveCourse("A", 4)).toBe(true);
    expect(session.preferences.pins["A"]).toBe(4);
    expect(session.termOf("A")).toBe(4);
    expect(session.banner).toBeNull();
  });

  it("shows an infeasibility banner with tags and keeps the old plan", async () => {
    const session = new PlannerSession(new FakeClient());
    session.rejectCourse("B");
    await session.run();
    const before = scheduled(session);

    // C is only offered in even terms, so term 3 cannot work
    expect(await session.moveCourse("C", 3)).toBe(false);
    expect(session.banner).not.toBeNull();
    expect(session.banner?.tags).toContain("pin:C:s3");
    expect(session.banner?.tags).toContain("offered:C:s3");
    expect(session.preferences.pins).toEqual({}); // rolled back
    expect(scheduled(session)).toEqual(before); // plan unchanged

    // the session still works after the failed edit
    expect(await session.moveCourse("C", 4)).toBe(true);
    expect(session.termOf("C")).toBe(4);
    expect(session.banner).toBeNull();
  });
});

describe("plan grid", () => {
  it("renders a dense grid with empty terms and totals", async () => {
    const session = new PlannerSession(new FakeClient());
    session.rejectCourse("B");
    await session.moveCourse("C", 4);
    const grid = planGrid(session.plan!, FAKE_CATALOG);

    expect(grid.cells).toHaveLength(6);
    expect(grid.cells.map((c) => c.token)).toEqual([
      "FA2022", "SP2023", "S12023", "S22023", "ST2023", "FA2023",
    ]);
    expect(grid.cells[0]?.courses.map((c) => c.code)).toEqual(["A"]);
    expect(grid.cells[2]?.courses).toEqual([]); // empty term still present
    expect(grid.cells[3]?.credits).toBe(3);
    expect(grid.completionTerm).toBe(4);
    expect(grid.totalCredits).toBe(6);
  });
});

describe("http client", () => {
  const fetchStub = (status: number, payload: unknown) =>
    async () =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

  it("parses successful responses", async () => {
    const client = new HttpApiClient("http://x", fetchStub(200, FAKE_CATALOG));
    const catalog = await client.getCatalog();
    expect(catalog.s_max).toBe(6);
    expect(catalog.courses.map((c) => c.code)).toEqual(["A", "B", "C"]);
  });

  it("turns error payloads into ApiError with tags", async () => {
    const client = new HttpApiClient(
      "http://x",
      fetchStub(409, {
        code: "infeasible",
        message: "no schedule satisfies all constraints",
        tags: ["pin:C:s3"],
      }),
    );
    const failure = await client
      .plan({ transcript: [], preferences: defaultPreferences() })
      .catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(409);
    expect((failure as ApiError).tags).toEqual(["pin:C:s3"]);
  });
});
