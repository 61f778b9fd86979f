import { describe, expect, it } from "vitest";
import { ApiError, Client } from "../src/api.js";
import { fakeFetch, loadExchanges } from "./fakefetch.js";

const exchanges = loadExchanges("http_session.json");

function client(): Client {
  return new Client("", fakeFetch(exchanges));
}

describe("api client", () => {
  it("creates a session from the family preset", async () => {
    const c = client();
    const s = await c.createSession({
      family: [4, 6],
      prime: 101,
      trunc: 6,
      seed: 0,
    });
    expect(s.id).toBe("SESSION");
    expect(s.degrees).toEqual([1, 4, 1, 6]);
    expect(s.matrix.n).toBe(4);
    expect(s.matrix.rows).toEqual(s.initial_matrix.rows);
    expect(s.history).toEqual([]);
    expect(s.can_undo).toBe(false);
    expect(s.arrows.map((a) => a.name)).toEqual(["a1_4", "a2_1", "a3_2", "a4_3"]);
  });

  it("fetches session state and potential summary", async () => {
    const c = client();
    await c.createSession({ family: [4, 6], prime: 101, trunc: 6, seed: 0 });
    const s = await c.getSession("SESSION");
    expect(s.id).toBe("SESSION");
    const pot = await c.potential("SESSION");
    expect(pot.trunc).toBe(6);
    const degrees = Object.keys(pot.terms_by_degree).map(Number);
    expect(degrees.length).toBeGreaterThan(0);
    for (const d of degrees) expect(d).toBeGreaterThanOrEqual(3);
  });

  it("surfaces server 400/409 as ApiError with the detail string", async () => {
    const c = client();
    await c.createSession({ family: [4, 6], prime: 101, trunc: 6, seed: 0 });
    // walk the recording up to the error exchanges
    for (const k of [1, 2, 1, 2, 1, 2]) await c.mutate("SESSION", k);

    const badVertex = await c.mutate("SESSION", 0).catch((e: unknown) => e);
    expect(badVertex).toBeInstanceOf(ApiError);
    expect((badVertex as ApiError).status).toBe(400);

    const repeat = await c.mutate("SESSION", 2).catch((e: unknown) => e);
    expect(repeat).toBeInstanceOf(ApiError);
    expect((repeat as ApiError).status).toBe(409);

    for (let i = 0; i < 6; i++) await c.undo("SESSION");
    const emptyUndo = await c.undo("SESSION").catch((e: unknown) => e);
    expect(emptyUndo).toBeInstanceOf(ApiError);
    expect((emptyUndo as ApiError).status).toBe(409);
  });
});
